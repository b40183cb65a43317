use std::collections::HashMap;
use std::sync::Arc;

use super::{FinCategory, FinFunctor, Morphism, Result};

fn tuple(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

/// Mixed-radix digits of `k` with the last factor varying fastest.
fn digits(mut k: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for i in (0..radix.len()).rev() {
        out[i] = k % radix[i];
        k /= radix[i];
    }
    out
}

fn undigits(ds: &[usize], radix: &[usize]) -> usize {
    ds.iter().zip(radix).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// One object `()` with its identity.
pub fn terminal_category() -> FinCategory {
    product_category(&[])
}

/// Cartesian product with tuple ids; grade of a tuple is the max component grade.
pub fn product_category(cs: &[&FinCategory]) -> FinCategory {
    let obj_radix: Vec<usize> = cs.iter().map(|c| c.num_objects()).collect();
    let mor_radix: Vec<usize> = cs.iter().map(|c| c.num_morphisms()).collect();
    let n_obj: usize = obj_radix.iter().product();
    let n_mor: usize = mor_radix.iter().product();

    let objects = (0..n_obj)
        .map(|k| {
            let d = digits(k, &obj_radix);
            let parts: Vec<&str> = cs.iter().zip(&d).map(|(c, &i)| c.object(i)).collect();
            tuple(&parts)
        })
        .collect();
    let mut morphisms = Vec::with_capacity(n_mor);
    for k in 0..n_mor {
        let d = digits(k, &mor_radix);
        let parts: Vec<&str> = cs.iter().zip(&d).map(|(c, &m)| c.mor_id(m)).collect();
        let src: Vec<usize> = cs.iter().zip(&d).map(|(c, &m)| c.source(m)).collect();
        let tgt: Vec<usize> = cs.iter().zip(&d).map(|(c, &m)| c.target(m)).collect();
        morphisms.push(Morphism {
            id: tuple(&parts),
            source: undigits(&src, &obj_radix),
            target: undigits(&tgt, &obj_radix),
            grade: cs.iter().zip(&d).map(|(c, &m)| c.grade(m)).max().unwrap_or(0),
        });
    }
    let identities = (0..n_obj)
        .map(|k| {
            let d = digits(k, &obj_radix);
            let ids: Vec<usize> = cs.iter().zip(&d).map(|(c, &x)| c.identity(x)).collect();
            undigits(&ids, &mor_radix)
        })
        .collect();
    let mut compose = HashMap::new();
    for f in 0..n_mor {
        let df = digits(f, &mor_radix);
        for g in 0..n_mor {
            if morphisms[g].source != morphisms[f].target {
                continue;
            }
            let dg = digits(g, &mor_radix);
            let dh: Option<Vec<usize>> = cs.iter().enumerate().map(|(i, c)| c.compose(dg[i], df[i])).collect();
            if let Some(dh) = dh {
                compose.insert((g, f), undigits(&dh, &mor_radix));
            }
        }
    }
    FinCategory::assemble(objects, morphisms, identities, compose)
}

/// The `i`-th projection out of `product`, which must have been built from `factors`.
pub fn projection(product: Arc<FinCategory>, factors: &[Arc<FinCategory>], i: usize) -> Result<FinFunctor> {
    let obj_radix: Vec<usize> = factors.iter().map(|c| c.num_objects()).collect();
    let mor_radix: Vec<usize> = factors.iter().map(|c| c.num_morphisms()).collect();
    let objs = (0..product.num_objects()).map(|k| digits(k, &obj_radix)[i]).collect();
    let mors = (0..product.num_morphisms()).map(|k| digits(k, &mor_radix)[i]).collect();
    FinFunctor::from_indices(format!("pi{i}"), product, factors[i].clone(), objs, mors)
}

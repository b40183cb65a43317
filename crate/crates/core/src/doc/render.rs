use std::collections::BTreeSet;

use crate::hsg::{check_state_identity, Grid, GridError};

const COLLISION: &str = " [!]";

/// Plain-text table of token ids over two axes. Undefined tokens are shown
/// in parentheses; cells holding two defined tokens with the same state get
/// a collision marker.
pub fn render_grid_table(g: &Grid, rows: &str, cols: &str) -> Result<String, GridError> {
    let ra = g.axis_index(rows).ok_or_else(|| GridError::NotFound(format!("axis {rows:?}")))?;
    let ca = g.axis_index(cols).ok_or_else(|| GridError::NotFound(format!("axis {cols:?}")))?;
    let (rax, cax) = (&g.axes()[ra], &g.axes()[ca]);
    let colliding: BTreeSet<String> = check_state_identity(g).into_iter().flat_map(|c| c.tokens).collect();

    let mut table: Vec<Vec<String>> = Vec::new();
    let mut header = vec![format!("{} / {}", rax.display_title(), cax.display_title())];
    header.extend((0..cax.indices.len()).map(|j| cax.label(j)));
    table.push(header);
    if !g.is_empty() {
        for i in 0..rax.indices.len() {
            let mut row = vec![rax.label(i)];
            for j in 0..cax.indices.len() {
                let here: Vec<usize> = (0..g.len()).filter(|&t| g.position(t, ra) == i && g.position(t, ca) == j).collect();
                let mut cell = here
                    .iter()
                    .map(|&t| {
                        let id = &g.tokens()[t].id;
                        if g.delta(t).is_top() {
                            id.clone()
                        } else {
                            format!("({id})")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                let defined: Vec<&String> = here.iter().filter(|&&t| g.delta(t).is_top()).map(|&t| &g.tokens()[t].id).collect();
                if defined.len() > 1 && defined.iter().filter(|id| colliding.contains(**id)).count() > 1 {
                    cell.push_str(COLLISION);
                }
                row.push(cell);
            }
            table.push(row);
        }
    }

    let width = |s: &str| s.chars().count();
    let widths: Vec<usize> = (0..table[0].len()).map(|c| table.iter().map(|r| width(&r[c])).max().unwrap()).collect();
    let line = |r: &[String]| {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - width(s)))).collect();
        format!("| {} |", cells.join(" | "))
    };
    let mut out = line(&table[0]);
    out.push('\n');
    out.push_str(&format!("|-{}-|", widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("-|-")));
    out.push('\n');
    for r in &table[1..] {
        out.push_str(&line(r));
        out.push('\n');
    }
    Ok(out)
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RegistryError;

/// A finite institution: per signature, sentences, models and the
/// satisfaction table `satisfies[sig][model][sentence]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Institution {
    pub name: String,
    pub signatures: Vec<String>,
    pub sentences: BTreeMap<String, Vec<String>>,
    pub models: BTreeMap<String, Vec<String>>,
    pub satisfies: BTreeMap<String, Vec<Vec<bool>>>,
}

impl Institution {
    pub fn validate(&self) -> Result<(), RegistryError> {
        for sig in &self.signatures {
            let sens = self.sentences.get(sig);
            let mods = self.models.get(sig);
            let table = self.satisfies.get(sig);
            let (Some(sens), Some(mods), Some(table)) = (sens, mods, table) else {
                return Err(RegistryError::Malformed(format!("{}: signature {sig:?} lacks a table", self.name)));
            };
            if table.len() != mods.len() || table.iter().any(|row| row.len() != sens.len()) {
                return Err(RegistryError::Malformed(format!("{}: satisfaction table for {sig:?} is not total", self.name)));
            }
        }
        Ok(())
    }

    fn sentence(&self, sig: &str, s: &str) -> Option<usize> {
        self.sentences.get(sig)?.iter().position(|x| x == s)
    }

    fn model(&self, sig: &str, m: &str) -> Option<usize> {
        self.models.get(sig)?.iter().position(|x| x == m)
    }

    pub fn holds(&self, sig: &str, model: &str, sentence: &str) -> Option<bool> {
        let (m, s) = (self.model(sig, model)?, self.sentence(sig, sentence)?);
        Some(self.satisfies[sig][m][s])
    }
}

/// Maps keyed by source signature. `model_map` sends source models to
/// target models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstitutionMorphism {
    pub source: Institution,
    pub target: Institution,
    pub signature_map: BTreeMap<String, String>,
    pub sentence_map: BTreeMap<String, BTreeMap<String, String>>,
    pub model_map: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub signature: String,
    pub model: String,
    pub sentence: String,
}

/// Every `(Σ, M, φ)` with `M ⊨ φ` whose image is not satisfied.
pub fn check_institution_morphism(m: &InstitutionMorphism) -> Result<Vec<Counterexample>, RegistryError> {
    m.source.validate()?;
    m.target.validate()?;
    let missing = |what: &str| RegistryError::Malformed(format!("{what} is not mapped"));
    let mut out = Vec::new();
    for sig in &m.source.signatures {
        let tsig = m.signature_map.get(sig).ok_or_else(|| missing(&format!("signature {sig:?}")))?;
        if !m.target.signatures.contains(tsig) {
            return Err(RegistryError::Malformed(format!("signature {tsig:?} is not in the target")));
        }
        let sens = m.sentence_map.get(sig).ok_or_else(|| missing(&format!("sentences of {sig:?}")))?;
        let mods = m.model_map.get(sig).ok_or_else(|| missing(&format!("models of {sig:?}")))?;
        for (mi, model) in m.source.models[sig].iter().enumerate() {
            let tm = mods.get(model).ok_or_else(|| missing(&format!("model {model:?}")))?;
            for (si, sentence) in m.source.sentences[sig].iter().enumerate() {
                let ts = sens.get(sentence).ok_or_else(|| missing(&format!("sentence {sentence:?}")))?;
                let image = m
                    .target
                    .holds(tsig, tm, ts)
                    .ok_or_else(|| RegistryError::Malformed(format!("image ({tm}, {ts}) is not in the target")))?;
                if m.source.satisfies[sig][mi][si] && !image {
                    out.push(Counterexample {
                        signature: sig.clone(),
                        model: model.clone(),
                        sentence: sentence.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

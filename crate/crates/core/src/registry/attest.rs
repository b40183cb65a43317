use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Registry, RegistryError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attestation {
    pub instance_id: String,
    pub package_digest: String,
    pub counter: u64,
    pub statement: String,
    pub echo: String,
}

fn statement(instance: &str, digest: &str, counter: u64) -> String {
    format!("instance {instance} with digest {digest} is operating at {counter}")
}

#[derive(Serialize, Deserialize)]
struct Parts {
    instance: String,
    digest: String,
    counter: u64,
}

/// Rebuild the statement from a JSON round trip of its parts, not from the
/// in-memory string.
fn echo_of(instance: &str, digest: &str, counter: u64) -> Result<String, RegistryError> {
    let text = serde_json::to_string(&Parts {
        instance: instance.into(),
        digest: digest.into(),
        counter,
    })
    .map_err(|e| RegistryError::Malformed(e.to_string()))?;
    let p: Parts = serde_json::from_str(&text).map_err(|e| RegistryError::Malformed(e.to_string()))?;
    let mut out = String::new();
    for (word, value) in [("instance", p.instance), ("with digest", p.digest), ("is operating at", p.counter.to_string())] {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
        out.push(' ');
        out.push_str(&value);
    }
    Ok(out)
}

pub fn registry_digest(r: &Registry) -> String {
    hex::encode(Sha256::digest(r.to_canonical().as_bytes()))
}

pub fn attest_internal(r: &Registry, instance_id: &str, counter: u64) -> Result<Attestation, RegistryError> {
    let digest = registry_digest(r);
    let a = Attestation {
        statement: statement(instance_id, &digest, counter),
        echo: echo_of(instance_id, &digest, counter)?,
        instance_id: instance_id.into(),
        package_digest: digest,
        counter,
    };
    if !verify(&a) {
        return Err(RegistryError::Malformed("echo differs from statement".into()));
    }
    Ok(a)
}

/// `S(t) = t` for the statement, and the statement matches its fields.
pub fn verify(a: &Attestation) -> bool {
    a.package_digest.len() == 64
        && a.echo.as_bytes() == a.statement.as_bytes()
        && a.statement == statement(&a.instance_id, &a.package_digest, a.counter)
}

//! JSON file formats.
//!
//! Operation tables are nested arrays indexed by the arguments in order, so
//! a binary table on `{0, 1}` is `[[f(0,0), f(0,1)], [f(1,0), f(1,1)]]` and a
//! constant is a bare number. Terms are `{"var": i}` (0-based) or
//! `{"op": name, "args": [...]}`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use dualram_core::algebras::FiniteAlgebra;
use dualram_core::ordered::OrderedAlgebra;
use dualram_core::terms::{Signature, Term};

/// A signature inline or by catalog name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignatureRef {
    Named(String),
    Inline(Signature),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureFile {
    pub name: String,
    #[serde(flatten)]
    pub signature: Signature,
}

/// An algebra, optionally with a linear order on its carrier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub signature: SignatureRef,
    pub size: usize,
    pub tables: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

/// A variety named by its generating algebras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyFile {
    pub name: String,
    pub generators: Vec<GeneratorRef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorRef {
    Named(String),
    Inline(AlgebraFile),
}

pub fn nested(flat: &[usize], size: usize, arity: usize) -> Value {
    if arity == 0 {
        return json!(flat[0]);
    }
    let chunk = size.pow(arity as u32 - 1);
    Value::Array((0..size).map(|i| nested(&flat[i * chunk..(i + 1) * chunk], size, arity - 1)).collect())
}

pub fn flat(value: &Value, size: usize, arity: usize) -> Result<Vec<usize>> {
    if arity == 0 {
        let v = value.as_u64().ok_or_else(|| anyhow!("expected a carrier element, found {value}"))?;
        return Ok(vec![v as usize]);
    }
    let rows = value.as_array().ok_or_else(|| anyhow!("expected an array of length {size}"))?;
    ensure!(rows.len() == size, "table row has {} entries, expected {size}", rows.len());
    let mut out = Vec::with_capacity(size.pow(arity as u32));
    for row in rows {
        out.extend(flat(row, size, arity - 1)?);
    }
    Ok(out)
}

impl AlgebraFile {
    pub fn from_algebra(name: &str, a: &FiniteAlgebra, order: Option<&[usize]>) -> Self {
        let sig = a.signature();
        let tables = (0..sig.len())
            .map(|s| (sig.name(s).to_string(), nested(a.table(s), a.size(), sig.arity(s))))
            .collect();
        AlgebraFile {
            name: name.to_string(),
            signature: SignatureRef::Inline(sig.clone()),
            size: a.size(),
            tables,
            order: order.map(<[usize]>::to_vec),
        }
    }

    pub fn from_ordered(name: &str, a: &OrderedAlgebra) -> Self {
        AlgebraFile::from_algebra(name, a.algebra(), Some(a.order()))
    }

    pub fn to_algebra(&self, signatures: &BTreeMap<String, Signature>) -> Result<FiniteAlgebra> {
        let sig = match &self.signature {
            SignatureRef::Inline(s) => s.clone(),
            SignatureRef::Named(n) => signatures.get(n).cloned().ok_or_else(|| anyhow!("unknown signature `{n}`"))?,
        };
        for key in self.tables.keys() {
            ensure!(sig.index_of(key).is_some(), "table for `{key}` which is not in the signature");
        }
        let tables = (0..sig.len())
            .map(|s| {
                let value = self
                    .tables
                    .get(sig.name(s))
                    .ok_or_else(|| anyhow!("missing table for `{}`", sig.name(s)))?;
                flat(value, self.size, sig.arity(s)).with_context(|| format!("table of `{}`", sig.name(s)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteAlgebra::new(sig, self.size, tables)?)
    }

    pub fn to_ordered(&self, signatures: &BTreeMap<String, Signature>) -> Result<OrderedAlgebra> {
        let order = self.order.clone().ok_or_else(|| anyhow!("algebra `{}` has no \"order\"", self.name))?;
        Ok(OrderedAlgebra::new(self.to_algebra(signatures)?, order)?)
    }
}

pub fn term_to_json(t: &Term, sig: &Signature) -> Value {
    match t {
        Term::Var(i) => json!({ "var": i }),
        Term::App(s, args) if args.is_empty() => json!({ "op": sig.name(*s) }),
        Term::App(s, args) => json!({
            "op": sig.name(*s),
            "args": args.iter().map(|a| term_to_json(a, sig)).collect::<Vec<_>>(),
        }),
    }
}

pub fn term_from_json(value: &Value, sig: &Signature) -> Result<Term> {
    let obj = value.as_object().ok_or_else(|| anyhow!("a term is a JSON object, found {value}"))?;
    if let Some(v) = obj.get("var") {
        ensure!(obj.len() == 1, "variable terms carry only \"var\"");
        let i = v.as_u64().ok_or_else(|| anyhow!("variable index must be a natural number"))?;
        return Ok(Term::Var(i as usize));
    }
    let name = obj
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("a term needs \"var\" or \"op\""))?;
    let s = sig.index_of(name).ok_or_else(|| anyhow!("unknown operation `{name}`"))?;
    let args = match obj.get("args") {
        None => Vec::new(),
        Some(Value::Array(items)) => items.iter().map(|a| term_from_json(a, sig)).collect::<Result<Vec<_>>>()?,
        Some(other) => bail!("\"args\" must be an array, found {other}"),
    };
    ensure!(
        args.len() == sig.arity(s),
        "`{name}` takes {} arguments, got {}",
        sig.arity(s),
        args.len()
    );
    Ok(Term::App(s, args))
}

/// Pretty JSON followed by a newline.
pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_tables_round_trip() {
        let sig = Signature::from_pairs(&[("e", 0), ("inv", 1), ("mul", 2)]).unwrap();
        let a = FiniteAlgebra::from_fn(sig, 3, |s, x| match s {
            0 => 0,
            1 => (3 - x[0]) % 3,
            _ => (x[0] + x[1]) % 3,
        })
        .unwrap();
        let file = AlgebraFile::from_algebra("z3", &a, None);
        assert_eq!(file.tables["e"], json!(0));
        assert_eq!(file.tables["mul"][1], json!([1, 2, 0]));
        let text = serde_json::to_string(&file).unwrap();
        let back: AlgebraFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_algebra(&BTreeMap::new()).unwrap(), a);
    }

    #[test]
    fn terms_round_trip() {
        let sig = Signature::from_pairs(&[("c", 0), ("f", 3), ("g", 2)]).unwrap();
        let t = Term::app(1, vec![Term::app(2, vec![Term::Var(1), Term::Var(0)]), Term::constant(0), Term::Var(0)]);
        let v = term_to_json(&t, &sig);
        assert_eq!(v["args"][1], json!({"op": "c"}));
        assert_eq!(term_from_json(&v, &sig).unwrap(), t);
        assert!(term_from_json(&json!({"op": "g", "args": [{"var": 0}]}), &sig).is_err());
    }

    #[test]
    fn bad_tables_rejected() {
        let file: AlgebraFile = serde_json::from_value(json!({
            "signature": {"symbols": [{"name": "m", "arity": 2}]},
            "size": 2,
            "tables": {"m": [[0, 1], [1]]}
        }))
        .unwrap();
        assert!(file.to_algebra(&BTreeMap::new()).is_err());
    }
}

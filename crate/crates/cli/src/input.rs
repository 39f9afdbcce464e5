//! JSON input files.
//!
//! ```json
//! {
//!   "basis": [{"name": "e", "degree": 0}],
//!   "ops": {"circ": [{"inputs": ["e", "e"], "output": "e", "coeff": "1/2"}]},
//!   "variant": "pinf",
//!   "mu": {"1,1": [{"inputs": ["e", "e"], "output": "e", "coeff": "1"}]}
//! }
//! ```
//!
//! Operation names are `circ`, `bullet`, `star` for algebras and `mul`, `d`
//! for dg commutative algebras. A `mu` block keyed `"k,p"` lists the `k`
//! symmetric inputs first.

use std::collections::BTreeMap;
use std::str::FromStr;

use nijenhuis_core::algebra::{AlgebraStructure, BasisElement, DgcaStructure, OpKind, Vector};
use nijenhuis_core::infinity::MuCollection;
use nijenhuis_core::operad::CobarVariant;
use nijenhuis_core::{FormalSum, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Constant {
    pub inputs: Vec<String>,
    pub output: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub ops: BTreeMap<String, Vec<Constant>>,
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub mu: BTreeMap<String, Vec<Constant>>,
}

/// What a file describes.
#[derive(Clone, Debug)]
pub enum Structure {
    Algebra(AlgebraStructure),
    Dgca(DgcaStructure),
    Mu(MuCollection),
}

pub fn parse_variant(s: &str) -> Result<CobarVariant, CliError> {
    match s {
        "pinf" | "P" | "P∞" => Ok(CobarVariant::PInfinity),
        "ninf" | "N" | "N∞" => Ok(CobarVariant::NInfinity),
        _ => Err(CliError::Validation(format!("unknown variant `{s}` (expected pinf or ninf)"))),
    }
}

pub fn parse_text(text: &str) -> Result<InputFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load(path: &std::path::Path) -> Result<Structure, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_text(&text)?.into_structure()
}

impl InputFile {
    fn basis(&self) -> Result<(Vec<BasisElement>, BTreeMap<&str, usize>), CliError> {
        let mut index = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            if index.insert(b.name.as_str(), i).is_some() {
                return Err(CliError::Validation(format!("basis name `{}` is repeated", b.name)));
            }
        }
        if self.basis.is_empty() {
            return Err(CliError::Validation("basis is empty".into()));
        }
        let basis = self.basis.iter().map(|b| BasisElement::new(b.name.clone(), b.degree)).collect();
        Ok((basis, index))
    }

    fn resolve(index: &BTreeMap<&str, usize>, c: &Constant) -> Result<(Vec<usize>, usize, Scalar), CliError> {
        let find = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| CliError::Validation(format!("unknown basis element `{n}`")))
        };
        let inputs = c.inputs.iter().map(|n| find(n)).collect::<Result<Vec<_>, _>>()?;
        let coeff = Scalar::from_str(&c.coeff)
            .map_err(|_| CliError::Validation(format!("coefficient `{}` is not a rational literal", c.coeff)))?;
        Ok((inputs, find(&c.output)?, coeff))
    }

    pub fn into_structure(self) -> Result<Structure, CliError> {
        let (basis, index) = self.basis()?;
        if !self.mu.is_empty() {
            if !self.ops.is_empty() {
                return Err(CliError::Validation("a file holds either ops or mu, not both".into()));
            }
            let variant = parse_variant(self.variant.as_deref().unwrap_or("pinf"))?;
            return self.mu_collection(basis, &index, variant).map(Structure::Mu);
        }
        if self.ops.keys().any(|k| k == "mul" || k == "d") {
            return self.dgca(basis, &index).map(Structure::Dgca);
        }
        let mut s = AlgebraStructure::new(basis);
        for (name, entries) in &self.ops {
            let op = OpKind::from_name(name).ok_or_else(|| CliError::Validation(format!("unknown operation `{name}`")))?;
            s.ensure_op(op);
            for c in entries {
                let (inputs, out, coeff) = Self::resolve(&index, c)?;
                let [a, b] = inputs[..] else {
                    return Err(CliError::Validation(format!("`{name}` takes two inputs")));
                };
                s.add_to(op, a, b, out, coeff);
            }
        }
        s.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(Structure::Algebra(s))
    }

    fn dgca(&self, basis: Vec<BasisElement>, index: &BTreeMap<&str, usize>) -> Result<DgcaStructure, CliError> {
        let n = basis.len();
        let mut product: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        let mut differential = vec![Vector::zero(); n];
        for (name, entries) in &self.ops {
            for c in entries {
                let (inputs, out, coeff) = Self::resolve(index, c)?;
                match (name.as_str(), &inputs[..]) {
                    ("mul", &[a, b]) => product.entry((a, b)).or_insert_with(FormalSum::zero).add_term(out, coeff),
                    ("d", &[a]) => differential[a].add_term(out, coeff),
                    _ => return Err(CliError::Validation(format!("bad `{name}` entry with {} inputs", inputs.len()))),
                }
            }
        }
        product.retain(|_, v| !v.is_zero());
        let a = DgcaStructure {
            basis,
            product,
            differential,
        };
        if let Some(v) = a.check().violations.first() {
            return Err(CliError::Validation(format!("not a dgca: {v}")));
        }
        Ok(a)
    }

    fn mu_collection(
        &self,
        basis: Vec<BasisElement>,
        index: &BTreeMap<&str, usize>,
        variant: CobarVariant,
    ) -> Result<MuCollection, CliError> {
        let mut mu = MuCollection::new(basis, variant);
        let mut values: BTreeMap<(Vec<usize>, Vec<usize>), Vector> = BTreeMap::new();
        for (key, entries) in &self.mu {
            let (k, p) = key
                .split_once(',')
                .and_then(|(k, p)| Some((k.trim().parse::<usize>().ok()?, p.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| CliError::Validation(format!("mu key `{key}` is not of the form \"k,p\"")))?;
            for c in entries {
                let (inputs, out, coeff) = Self::resolve(index, c)?;
                if inputs.len() != k + p {
                    return Err(CliError::Validation(format!("μ_{{{k},{p}}} takes {} inputs", k + p)));
                }
                let (sym, anti) = inputs.split_at(k);
                values
                    .entry((sym.to_vec(), anti.to_vec()))
                    .or_insert_with(Vector::zero)
                    .add_term(out, coeff);
            }
        }
        for ((sym, anti), v) in values {
            let previous = mu.get(&sym, &anti);
            if !previous.is_zero() && previous != v {
                return Err(CliError::Validation(format!(
                    "μ({sym:?}; {anti:?}) conflicts with a value implied by symmetry"
                )));
            }
            mu.set(&sym, &anti, v).map_err(|e| CliError::Validation(e.to_string()))?;
        }
        Ok(mu)
    }
}

/// Serializes a structure back into the file format.
pub fn algebra_to_file(s: &AlgebraStructure) -> InputFile {
    let basis = s
        .basis
        .iter()
        .map(|b| BasisEntry {
            name: b.name.clone(),
            degree: b.degree,
        })
        .collect();
    let mut ops = BTreeMap::new();
    for op in s.ops() {
        let entries = s
            .entries(op)
            .flat_map(|(&(a, b), v)| {
                v.iter().map(move |(&k, c)| Constant {
                    inputs: vec![s.basis[a].name.clone(), s.basis[b].name.clone()],
                    output: s.basis[k].name.clone(),
                    coeff: c.to_literal(),
                })
            })
            .collect();
        ops.insert(op.name().to_string(), entries);
    }
    InputFile {
        basis,
        ops,
        variant: None,
        mu: BTreeMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_loads() {
        let f = parse_text(r#"{"basis": [{"name": "e", "degree": 0}], "ops": {"circ": []}}"#).unwrap();
        let Structure::Algebra(s) = f.into_structure().unwrap() else {
            panic!("expected an algebra")
        };
        assert_eq!(s.dim(), 1);
        assert!(nijenhuis_core::algebra::check_prelie(&s).unwrap().is_empty());
    }

    #[test]
    fn rationals_are_exact() {
        let f = parse_text(
            r#"{"basis": [{"name": "e", "degree": 0}],
                "ops": {"circ": [{"inputs": ["e", "e"], "output": "e", "coeff": "1/3"}]}}"#,
        )
        .unwrap();
        let Structure::Algebra(s) = f.into_structure().unwrap() else {
            panic!("expected an algebra")
        };
        assert_eq!(s.product(OpKind::Circ, 0, 0).coefficient(&0), Scalar::ratio(1, 3));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_text("{\n  \"basis\": [,]\n}") {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn asymmetric_bullet_is_rejected() {
        let f = parse_text(
            r#"{"basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 0}, {"name": "c", "degree": 1}],
                "ops": {"bullet": [{"inputs": ["a", "b"], "output": "c", "coeff": "1"}]}}"#,
        )
        .unwrap();
        match f.into_structure() {
            Err(CliError::Validation(msg)) => assert!(msg.contains('a') && msg.contains('b'), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trips_through_the_format() {
        let s = nijenhuis_core::samples::image_of_q(&[0, 1], 2).unwrap();
        let text = serde_json::to_string(&algebra_to_file(&s)).unwrap();
        let Structure::Algebra(back) = parse_text(&text).unwrap().into_structure().unwrap() else {
            panic!("expected an algebra")
        };
        assert_eq!(back, s);
    }

    #[test]
    fn mu_blocks_load() {
        let f = parse_text(
            r#"{"basis": [{"name": "e", "degree": 0}], "variant": "ninf",
                "mu": {"1,1": [{"inputs": ["e", "e"], "output": "e", "coeff": "2"}]}}"#,
        )
        .unwrap();
        let Structure::Mu(mu) = f.into_structure().unwrap() else {
            panic!("expected a collection")
        };
        assert_eq!(mu.get(&[0], &[0]).coefficient(&0), Scalar::from_int(2));
        assert_eq!(mu.variant, CobarVariant::NInfinity);
    }
}

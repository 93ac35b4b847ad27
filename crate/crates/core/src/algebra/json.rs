//! On-disk algebra format.
//!
//! ```json
//! {"dim": 3, "basis": ["e1","e2","e3"],
//!  "brackets": [{"i": 2, "j": 3, "terms": [{"k": 1, "c": "1"}]}]}
//! ```
//!
//! `basis` defaults to `e1..en`. The optional `order` and `signs` fields fix
//! the generator order and signs used when building the automorphism matrix.

use serde::{Deserialize, Serialize};

use super::{check_order, default_basis, AlgebraError, LieAlgebra};
use crate::symbolic::parse_rational;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i8>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub k: usize,
    pub c: String,
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<LieAlgebra, AlgebraError> {
        let basis = self.basis.unwrap_or_else(|| default_basis(self.dim));
        if basis.len() != self.dim {
            return Err(AlgebraError::BasisMismatch {
                dim: self.dim,
                count: basis.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut entries = Vec::with_capacity(self.brackets.len());
        for (b, entry) in self.brackets.into_iter().enumerate() {
            if entry.i >= entry.j {
                return Err(AlgebraError::BracketOrder { i: entry.i, j: entry.j });
            }
            if !seen.insert((entry.i, entry.j)) {
                return Err(AlgebraError::DuplicateBracket { i: entry.i, j: entry.j });
            }
            let terms = entry
                .terms
                .into_iter()
                .enumerate()
                .map(|(t, term)| match parse_rational(&term.c) {
                    Some(c) => Ok((term.k, c)),
                    None => Err(AlgebraError::InvalidRational {
                        value: term.c,
                        context: format!("brackets[{b}].terms[{t}].c"),
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            entries.push((entry.i, entry.j, terms));
        }
        let mut alg = LieAlgebra::new(basis, entries)?;
        if let Some(name) = self.name {
            alg = alg.with_name(name);
        }
        if self.order.is_some() || self.signs.is_some() {
            let order = self.order.unwrap_or_else(|| (1..=self.dim).collect());
            let signs = self.signs.unwrap_or_else(|| vec![1; self.dim]);
            check_order(&order, &signs, self.dim)?;
            alg = alg.with_generator_order(order, signs)?;
        }
        Ok(alg)
    }

    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let (order, signs) = alg.generator_order();
        let default_order = order.iter().enumerate().all(|(a, &g)| g == a + 1) && signs.iter().all(|&s| s == 1);
        AlgebraFile {
            name: alg.name().map(str::to_string),
            dim: alg.dim(),
            basis: Some(alg.basis().to_vec()),
            brackets: alg
                .brackets()
                .map(|(i, j, terms)| BracketEntry {
                    i,
                    j,
                    terms: terms.iter().map(|(k, c)| Term { k: *k, c: c.to_string() }).collect(),
                })
                .collect(),
            order: (!default_order).then(|| order.to_vec()),
            signs: (!default_order).then(|| signs.to_vec()),
        }
    }
}

impl LieAlgebra {
    /// Parses the JSON format. The Jacobi identity is not checked.
    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| AlgebraError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.into_algebra()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AlgebraFile::from_algebra(self)).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::int;

    const G48_BM1: &str = r#"{
        "dim": 4,
        "brackets": [
            {"i": 1, "j": 4, "terms": [{"k": 1, "c": "0"}]},
            {"i": 2, "j": 3, "terms": [{"k": 1, "c": "1"}]},
            {"i": 2, "j": 4, "terms": [{"k": 2, "c": "1"}]},
            {"i": 3, "j": 4, "terms": [{"k": 3, "c": "-1"}]}
        ],
        "order": [1, 2, 3, 4],
        "signs": [1, 1, 1, -1]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let a = LieAlgebra::from_json(G48_BM1).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.bracket_count(), 3);
        assert_eq!(a.structure_constant(3, 4, 3), int(-1));
        assert_eq!(a.generator_order().1, &[1, 1, 1, -1]);
        let back = LieAlgebra::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_rat = r#"{"dim": 2, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "c": "1/0"}]}]}"#;
        let e = LieAlgebra::from_json(bad_rat).unwrap_err();
        assert!(e.to_string().starts_with("invalid rational"));
        let order = r#"{"dim": 2, "brackets": [{"i": 2, "j": 1, "terms": []}]}"#;
        assert_eq!(LieAlgebra::from_json(order), Err(AlgebraError::BracketOrder { i: 2, j: 1 }));
        let unknown = r#"{"dim": 2, "bogus": 1}"#;
        assert!(matches!(LieAlgebra::from_json(unknown), Err(AlgebraError::Json { .. })));
        let syntax = "{\n \"dim\": 2,\n \"brackets\": [\n}";
        assert!(matches!(LieAlgebra::from_json(syntax), Err(AlgebraError::Json { line: 4, .. })));
    }
}

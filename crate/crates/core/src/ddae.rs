//! Structural incidence of a delay differential-algebraic system.
//!
//! Only the sparsity pattern is modelled: which variable `x_k`, at which
//! multiple `p` of the (single) delay and with which derivative order `q`,
//! appears in which equation. Right-hand sides, initial functions and the
//! delay value itself are never materialized.
//!
//! The interchange format is JSON:
//!
//! ```text
//! { "n_equations": 3, "n_variables": 3,
//!   "equations": [
//!     { "index": 1, "label": "F1", "occurrences": [ { "var": 1, "shift": 0, "deriv": 1 } ] },
//!     ...
//!   ] }
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One variable occurrence `Δ_{shift·τ} x_var^{(deriv)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarOccurrence {
    pub var: u32,
    pub shift: i32,
    pub deriv: i32,
}

impl VarOccurrence {
    pub const fn new(var: u32, shift: i32, deriv: i32) -> Self {
        Self { var, shift, deriv }
    }
}

impl fmt::Display for VarOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift != 0 {
            write!(f, "D[{}]", self.shift)?;
        }
        write!(f, "x{}", self.var)?;
        match self.deriv {
            0 => Ok(()),
            1 => f.write_str("'"),
            q => write!(f, "^({q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationStruct {
    pub index: usize,
    #[serde(default)]
    pub label: String,
    pub occurrences: Vec<VarOccurrence>,
}

impl EquationStruct {
    pub fn new(index: usize, occurrences: Vec<VarOccurrence>) -> Self {
        Self {
            index,
            label: format!("F{index}"),
            occurrences,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdaeStructure {
    pub n_equations: usize,
    pub n_variables: usize,
    pub equations: Vec<EquationStruct>,
}

/// A single broken invariant found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoEquations,
    NoVariables,
    EquationCount { declared: usize, found: usize },
    EquationIndex { position: usize, index: usize },
    VarOutOfRange { equation: usize, occurrence: VarOccurrence, n_variables: usize },
    ShiftBelowFloor { equation: usize, occurrence: VarOccurrence },
    NegativeDerivative { equation: usize, occurrence: VarOccurrence },
    Duplicate { equation: usize, occurrence: VarOccurrence },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEquations => f.write_str("n_equations must be at least 1"),
            Violation::NoVariables => f.write_str("n_variables must be at least 1"),
            Violation::EquationCount { declared, found } => {
                write!(f, "declared {declared} equations but found {found}")
            }
            Violation::EquationIndex { position, index } => write!(
                f,
                "equation at position {} has index {index}, expected {}",
                position + 1,
                position + 1
            ),
            Violation::VarOutOfRange { equation, occurrence, n_variables } => write!(
                f,
                "equation {equation}: variable index {} outside 1..={n_variables}",
                occurrence.var
            ),
            Violation::ShiftBelowFloor { equation, occurrence } => write!(
                f,
                "equation {equation}: shift {} of x{} is below -1",
                occurrence.shift, occurrence.var
            ),
            Violation::NegativeDerivative { equation, occurrence } => write!(
                f,
                "equation {equation}: derivative order {} of x{} is negative",
                occurrence.deriv, occurrence.var
            ),
            Violation::Duplicate { equation, occurrence } => {
                write!(f, "equation {equation}: occurrence {occurrence} listed twice")
            }
        }
    }
}

impl Violation {
    fn into_error(self) -> Error {
        let msg = self.to_string();
        match self {
            Violation::EquationCount { .. }
            | Violation::EquationIndex { .. }
            | Violation::VarOutOfRange { .. } => Error::IndexOutOfRange(msg),
            Violation::Duplicate { equation, occurrence } => Error::DuplicateOccurrence {
                equation,
                occurrence: occurrence.to_string(),
            },
            Violation::NoEquations
            | Violation::NoVariables
            | Violation::ShiftBelowFloor { .. }
            | Violation::NegativeDerivative { .. } => Error::SchemaViolation(msg),
        }
    }
}

/// Checks every structural invariant; an empty result means the structure is valid.
pub fn validate(s: &DdaeStructure) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.n_equations == 0 {
        out.push(Violation::NoEquations);
    }
    if s.n_variables == 0 {
        out.push(Violation::NoVariables);
    }
    if s.equations.len() != s.n_equations {
        out.push(Violation::EquationCount {
            declared: s.n_equations,
            found: s.equations.len(),
        });
    }
    for (position, eq) in s.equations.iter().enumerate() {
        if eq.index != position + 1 {
            out.push(Violation::EquationIndex { position, index: eq.index });
        }
        let mut seen = BTreeSet::new();
        for &occ in &eq.occurrences {
            if occ.var == 0 || occ.var as usize > s.n_variables {
                out.push(Violation::VarOutOfRange {
                    equation: eq.index,
                    occurrence: occ,
                    n_variables: s.n_variables,
                });
            }
            if occ.shift < -1 {
                out.push(Violation::ShiftBelowFloor { equation: eq.index, occurrence: occ });
            }
            if occ.deriv < 0 {
                out.push(Violation::NegativeDerivative { equation: eq.index, occurrence: occ });
            }
            if !seen.insert(occ) {
                out.push(Violation::Duplicate { equation: eq.index, occurrence: occ });
            }
        }
    }
    out
}

/// Parses and validates a JSON document. Equations may appear in any order;
/// they are sorted by index before validation. Missing labels default to `F<i>`.
pub fn parse_ddae(document: &str) -> Result<DdaeStructure> {
    let mut s: DdaeStructure = serde_json::from_str(document).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => Error::SchemaViolation(e.to_string()),
            Category::Io | Category::Syntax | Category::Eof => {
                Error::MalformedDocument(e.to_string())
            }
        }
    })?;
    s.equations.sort_by_key(|eq| eq.index);
    for eq in &mut s.equations {
        if eq.label.is_empty() {
            eq.label = format!("F{}", eq.index);
        }
    }
    match validate(&s).into_iter().next() {
        Some(v) => Err(v.into_error()),
        None => Ok(s),
    }
}

impl DdaeStructure {
    /// Builds a structure from per-equation occurrence lists, numbering equations from 1.
    pub fn from_occurrences(n_variables: usize, equations: Vec<Vec<VarOccurrence>>) -> Self {
        let equations: Vec<_> = equations
            .into_iter()
            .enumerate()
            .map(|(i, occ)| EquationStruct::new(i + 1, occ))
            .collect();
        Self {
            n_equations: equations.len(),
            n_variables,
            equations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure serializes")
    }

    /// Equation by 1-based index.
    pub fn equation(&self, index: usize) -> Option<&EquationStruct> {
        index.checked_sub(1).and_then(|i| self.equations.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = include_str!("../data/small_delay_system.json");

    #[test]
    fn parses_small_delay_system() {
        let s = parse_ddae(SMALL).unwrap();
        assert_eq!(s.n_equations, 3);
        assert_eq!(s.n_variables, 3);
        assert_eq!(s.equations[0].occurrences, vec![VarOccurrence::new(1, 0, 1)]);
        assert!(s.equations[2].occurrences.contains(&VarOccurrence::new(3, -1, 0)));
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn minimal_single_equation() {
        let doc = r#"{"n_equations":1,"n_variables":1,
            "equations":[{"index":1,"occurrences":[{"var":1,"shift":0,"deriv":0}]}]}"#;
        let s = parse_ddae(doc).unwrap();
        assert_eq!(s.equations[0].label, "F1");
    }

    #[test]
    fn variable_index_out_of_range() {
        let doc = r#"{"n_equations":1,"n_variables":3,
            "equations":[{"index":1,"label":"F1","occurrences":[{"var":5,"shift":0,"deriv":0}]}]}"#;
        assert!(matches!(parse_ddae(doc), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn equation_index_gap() {
        let doc = r#"{"n_equations":2,"n_variables":1,
            "equations":[{"index":1,"occurrences":[]},{"index":3,"occurrences":[]}]}"#;
        assert!(matches!(parse_ddae(doc), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn syntax_vs_schema_errors() {
        assert!(matches!(parse_ddae("{\"n_equations\": 1,"), Err(Error::MalformedDocument(_))));
        let extra = r#"{"n_equations":1,"n_variables":1,"tau":0.5,
            "equations":[{"index":1,"occurrences":[]}]}"#;
        assert!(matches!(parse_ddae(extra), Err(Error::SchemaViolation(_))));
        let missing = r#"{"n_equations":1,"equations":[]}"#;
        assert!(matches!(parse_ddae(missing), Err(Error::SchemaViolation(_))));
        let extra_occ = r#"{"n_equations":1,"n_variables":1,
            "equations":[{"index":1,"occurrences":[{"var":1,"shift":0,"deriv":0,"coef":2}]}]}"#;
        assert!(matches!(parse_ddae(extra_occ), Err(Error::SchemaViolation(_))));
    }

    #[test]
    fn duplicate_occurrence() {
        let s = DdaeStructure::from_occurrences(
            1,
            vec![vec![VarOccurrence::new(1, 0, 0), VarOccurrence::new(1, 0, 0)]],
        );
        let v = validate(&s);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Duplicate { equation: 1, .. }));
        assert!(matches!(
            parse_ddae(&s.to_json()),
            Err(Error::DuplicateOccurrence { equation: 1, .. })
        ));
    }

    #[test]
    fn shift_floor() {
        let s = DdaeStructure::from_occurrences(1, vec![vec![VarOccurrence::new(1, -2, 0)]]);
        let v = validate(&s);
        assert_eq!(v, vec![Violation::ShiftBelowFloor {
            equation: 1,
            occurrence: VarOccurrence::new(1, -2, 0)
        }]);
    }

    #[test]
    fn negative_derivative_rejected() {
        let s = DdaeStructure::from_occurrences(1, vec![vec![VarOccurrence::new(1, 0, -1)]]);
        assert_eq!(validate(&s).len(), 1);
    }

    #[test]
    fn display_occurrence() {
        assert_eq!(VarOccurrence::new(3, -1, 0).to_string(), "D[-1]x3");
        assert_eq!(VarOccurrence::new(1, 0, 1).to_string(), "x1'");
        assert_eq!(VarOccurrence::new(2, 1, 3).to_string(), "D[1]x2^(3)");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn structure() -> impl Strategy<Value = DdaeStructure> {
            (1usize..5, 1usize..5).prop_flat_map(|(n_eq, n_var)| {
                let occ = (1..=n_var as u32, -1i32..3, 0i32..3)
                    .prop_map(|(k, p, q)| VarOccurrence::new(k, p, q));
                proptest::collection::vec(proptest::collection::btree_set(occ, 0..5), n_eq)
                    .prop_map(move |eqs| {
                        DdaeStructure::from_occurrences(
                            n_var,
                            eqs.into_iter().map(|s| s.into_iter().collect()).collect(),
                        )
                    })
            })
        }

        proptest! {
            #[test]
            fn round_trip(s in structure()) {
                let parsed = parse_ddae(&s.to_json()).unwrap();
                prop_assert!(validate(&parsed).is_empty());
                prop_assert_eq!(parse_ddae(&parsed.to_json()).unwrap(), parsed.clone());
                prop_assert_eq!(parsed, s);
            }
        }
    }
}

use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// The three families of symbols an expression may mention.
///
/// The derived order (coordinates, then group parameters, then exponential
/// units) is the variable order used by the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Dual coordinate `x_i` on the coadjoint space.
    Coordinate,
    /// Group parameter `t_k` (second canonical coordinate).
    GroupParam,
    /// Exponential unit `v_k = exp(t_k / q_k)`; invertible.
    ExpUnit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub kind: VarKind,
    /// 1-based index.
    pub index: u32,
}

impl Var {
    pub const fn x(index: u32) -> Var {
        Var { kind: VarKind::Coordinate, index }
    }

    pub const fn t(index: u32) -> Var {
        Var { kind: VarKind::GroupParam, index }
    }

    pub const fn v(index: u32) -> Var {
        Var { kind: VarKind::ExpUnit, index }
    }

    pub fn is_coordinate(&self) -> bool {
        self.kind == VarKind::Coordinate
    }

    pub fn is_param(&self) -> bool {
        self.kind != VarKind::Coordinate
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Coordinate => write!(f, "x{}", self.index),
            VarKind::GroupParam => write!(f, "t{}", self.index),
            VarKind::ExpUnit => write!(f, "v{}", self.index),
        }
    }
}

/// Denominators `q_k` of the exponential units, keyed by parameter index.
/// Missing entries mean `q_k = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpScales(pub BTreeMap<u32, u32>);

impl ExpScales {
    pub fn get(&self, k: u32) -> u32 {
        self.0.get(&k).copied().unwrap_or(1)
    }
}

/// Printing and parsing names for variables.
///
/// Group parameters and units are always `t<k>` / `v<k>`. Coordinates default
/// to `x<i>` but an algebra may supply its own names (`x13`, `f1`, ...).
#[derive(Clone, Debug, Default)]
pub struct VarNames {
    coords: Option<Vec<String>>,
    lookup: HashMap<String, u32>,
}

impl VarNames {
    pub fn new(coords: Vec<String>) -> Self {
        let lookup = coords
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32 + 1))
            .collect();
        VarNames {
            coords: Some(coords),
            lookup,
        }
    }

    /// Default `x1..xn` naming; `None` leaves the coordinate count unbounded.
    pub fn plain() -> Self {
        VarNames::default()
    }

    pub fn name(&self, v: Var) -> String {
        match (v.kind, &self.coords) {
            (VarKind::Coordinate, Some(names)) => names
                .get(v.index as usize - 1)
                .cloned()
                .unwrap_or_else(|| v.to_string()),
            _ => v.to_string(),
        }
    }

    pub fn resolve(&self, name: &str) -> Option<Var> {
        if let Some(&i) = self.lookup.get(name) {
            return Some(Var::x(i));
        }
        let (head, digits) = name.split_at(1.min(name.len()));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let index: u32 = digits.parse().ok().filter(|&i| i > 0)?;
        match head {
            "t" => Some(Var::t(index)),
            "v" => Some(Var::v(index)),
            "x" if self.coords.is_none() => Some(Var::x(index)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_order_is_coordinates_then_params_then_units() {
        assert!(Var::x(9) < Var::t(1));
        assert!(Var::t(9) < Var::v(1));
        assert!(Var::x(1) < Var::x(2));
    }

    #[test]
    fn custom_names_shadow_plain_coordinates() {
        let names = VarNames::new(vec!["x12".into(), "x13".into(), "f1".into()]);
        assert_eq!(names.resolve("x13"), Some(Var::x(2)));
        assert_eq!(names.resolve("f1"), Some(Var::x(3)));
        assert_eq!(names.resolve("x1"), None);
        assert_eq!(names.resolve("t4"), Some(Var::t(4)));
        assert_eq!(names.name(Var::x(3)), "f1");
        assert_eq!(VarNames::plain().resolve("x7"), Some(Var::x(7)));
        assert_eq!(VarNames::plain().resolve("t0"), None);
    }
}

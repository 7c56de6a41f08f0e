use std::fmt;

use crate::symexpr::{CoordId, CoordLookup, Role};

use super::GeometryError;

/// The bundle a chart coordinatizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BundleKind {
    Y,
    J1Y,
    VstarY,
    TstarY,
    Pi,
    Z,
    J1Pi,
    J1Z,
}

impl BundleKind {
    pub fn is_legendre(self) -> bool {
        matches!(self, BundleKind::VstarY | BundleKind::Pi)
    }

    pub fn is_homogeneous(self) -> bool {
        matches!(self, BundleKind::TstarY | BundleKind::Z)
    }

    pub fn is_jet(self) -> bool {
        matches!(self, BundleKind::J1Y | BundleKind::J1Pi | BundleKind::J1Z)
    }
}

impl fmt::Display for BundleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BundleKind::Y => "Y",
            BundleKind::J1Y => "J1Y",
            BundleKind::VstarY => "V*Y",
            BundleKind::TstarY => "T*Y",
            BundleKind::Pi => "Pi",
            BundleKind::Z => "Z",
            BundleKind::J1Pi => "J1Pi",
            BundleKind::J1Z => "J1Z",
        };
        f.write_str(s)
    }
}

const RESERVED: &[&str] = &["mom", "jet", "pp", "rho", "sin", "cos", "exp"];

fn valid_ident(s: &str) -> bool {
    let core = s.trim_end_matches('\'');
    let mut chars = core.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered coordinates of one bundle chart over a fibred chart `(x^λ, y^i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    kind: BundleKind,
    base_names: Vec<String>,
    fiber_names: Vec<String>,
    tag: String,
    coords: Vec<CoordId>,
}

impl Chart {
    /// Chart of `Y → X` with the given base and fiber coordinate names.
    pub fn fibred(base: &[&str], fiber: &[&str]) -> Result<Chart, GeometryError> {
        if base.is_empty() || fiber.is_empty() {
            return Err(GeometryError::InvalidChart(
                "base and fiber need at least one coordinate each".into(),
            ));
        }
        let mut seen: Vec<&str> = Vec::new();
        for name in base.iter().chain(fiber) {
            if !valid_ident(name) {
                return Err(GeometryError::InvalidChart(format!(
                    "'{name}' is not a valid coordinate name"
                )));
            }
            if RESERVED.contains(&name.trim_end_matches('\'')) {
                return Err(GeometryError::InvalidChart(format!("'{name}' is reserved")));
            }
            if seen.contains(name) {
                return Err(GeometryError::InvalidChart(format!(
                    "coordinate '{name}' is declared twice"
                )));
            }
            seen.push(name);
        }
        Ok(Chart::build(
            BundleKind::Y,
            base.iter().map(|s| s.to_string()).collect(),
            fiber.iter().map(|s| s.to_string()).collect(),
            String::new(),
        ))
    }

    fn build(
        kind: BundleKind,
        base_names: Vec<String>,
        fiber_names: Vec<String>,
        tag: String,
    ) -> Chart {
        let n = base_names.len();
        let base: Vec<CoordId> = base_names
            .iter()
            .enumerate()
            .map(|(l, s)| CoordId::new(s.clone(), Role::Base(l)))
            .collect();
        let fiber: Vec<CoordId> = fiber_names
            .iter()
            .enumerate()
            .map(|(i, s)| CoordId::new(s.clone(), Role::Fiber(i)))
            .collect();
        let momenta = || -> Vec<CoordId> {
            let mut out = Vec::new();
            for (i, f) in fiber_names.iter().enumerate() {
                for (l, b) in base_names.iter().enumerate() {
                    let name = if n == 1 {
                        format!("p_{f}")
                    } else {
                        format!("mom({f},{b})")
                    };
                    out.push(CoordId::new(name, Role::Momentum { fiber: i, base: l }));
                }
            }
            out
        };
        let pp = || CoordId::new(format!("pp{tag}"), Role::HomogMomentum);
        let mut coords: Vec<CoordId> = base.clone();
        coords.extend(fiber.iter().cloned());
        match kind {
            BundleKind::Y | BundleKind::J1Y => {}
            BundleKind::VstarY | BundleKind::Pi | BundleKind::J1Pi => coords.extend(momenta()),
            BundleKind::TstarY | BundleKind::Z | BundleKind::J1Z => {
                coords.push(pp());
                coords.extend(momenta());
            }
        }
        if kind.is_jet() {
            let vertical: Vec<CoordId> = coords.iter().filter(|c| !c.is_base()).cloned().collect();
            for a in &vertical {
                for (l, b) in base_names.iter().enumerate() {
                    coords.push(CoordId::new(
                        format!("jet({a},{b})"),
                        Role::jet(a.role(), l),
                    ));
                }
            }
        }
        coords.sort();
        Chart {
            kind,
            base_names,
            fiber_names,
            tag,
            coords,
        }
    }

    fn with_kind(&self, kind: BundleKind) -> Chart {
        Chart::build(
            kind,
            self.base_names.clone(),
            self.fiber_names.clone(),
            self.tag.clone(),
        )
    }

    /// The same bundle in primed coordinates (`x → x'`, `pp → pp'`, ...).
    pub fn primed(&self) -> Chart {
        Chart::build(
            self.kind,
            self.base_names.iter().map(|s| format!("{s}'")).collect(),
            self.fiber_names.iter().map(|s| format!("{s}'")).collect(),
            format!("{}'", self.tag),
        )
    }

    pub fn y_chart(&self) -> Chart {
        self.with_kind(BundleKind::Y)
    }

    /// Legendre bundle chart; `V*Y` when the base is one-dimensional.
    pub fn legendre(&self) -> Chart {
        self.with_kind(if self.base_dim() == 1 {
            BundleKind::VstarY
        } else {
            BundleKind::Pi
        })
    }

    /// Homogeneous Legendre bundle chart; `T*Y` when the base is one-dimensional.
    pub fn homogeneous(&self) -> Chart {
        self.with_kind(if self.base_dim() == 1 {
            BundleKind::TstarY
        } else {
            BundleKind::Z
        })
    }

    /// First jet chart of this bundle.
    pub fn jet(&self) -> Result<Chart, GeometryError> {
        let kind = match self.kind {
            BundleKind::Y => BundleKind::J1Y,
            BundleKind::VstarY | BundleKind::Pi => BundleKind::J1Pi,
            BundleKind::TstarY | BundleKind::Z => BundleKind::J1Z,
            k => return Err(GeometryError::UnsupportedKind(k)),
        };
        Ok(self.with_kind(kind))
    }

    /// The chart a jet chart sits over (itself for non-jet charts).
    pub fn underlying(&self) -> Chart {
        match self.kind {
            BundleKind::J1Y => self.with_kind(BundleKind::Y),
            BundleKind::J1Pi => self.legendre(),
            BundleKind::J1Z => self.homogeneous(),
            _ => self.clone(),
        }
    }

    /// Chart of the requested kind over the same fibred coordinates.
    pub fn of_kind(&self, kind: BundleKind) -> Result<Chart, GeometryError> {
        let one = self.base_dim() == 1;
        let ok = match kind {
            BundleKind::VstarY | BundleKind::TstarY => one,
            BundleKind::Pi | BundleKind::Z => !one,
            BundleKind::J1Pi | BundleKind::J1Z | BundleKind::Y | BundleKind::J1Y => true,
        };
        if ok {
            Ok(self.with_kind(kind))
        } else {
            Err(GeometryError::UnsupportedKind(kind))
        }
    }

    pub fn kind(&self) -> BundleKind {
        self.kind
    }

    pub fn base_dim(&self) -> usize {
        self.base_names.len()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_names.len()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CoordId] {
        &self.coords
    }

    pub fn contains(&self, c: &CoordId) -> bool {
        self.coords.binary_search(c).is_ok()
    }

    pub fn base_coords(&self) -> Vec<CoordId> {
        self.coords
            .iter()
            .filter(|c| c.is_base())
            .cloned()
            .collect()
    }

    pub fn base(&self, l: usize) -> CoordId {
        self.coords[l].clone()
    }

    pub fn fiber_coords(&self) -> Vec<CoordId> {
        self.filtered(|r| matches!(r, Role::Fiber(_)))
    }

    pub fn fiber(&self, i: usize) -> CoordId {
        self.coords[self.base_dim() + i].clone()
    }

    /// Momenta `p^λ_i`, ordered by fiber index then base index.
    pub fn momenta(&self) -> Vec<CoordId> {
        self.filtered(|r| matches!(r, Role::Momentum { .. }))
    }

    pub fn momentum(&self, fiber: usize, base: usize) -> Option<CoordId> {
        self.by_role(&Role::Momentum { fiber, base })
    }

    pub fn homog_momentum(&self) -> Option<CoordId> {
        self.by_role(&Role::HomogMomentum)
    }

    /// Non-base, non-jet coordinates.
    pub fn vertical_coords(&self) -> Vec<CoordId> {
        self.coords
            .iter()
            .filter(|c| !c.is_base() && !c.is_jet())
            .cloned()
            .collect()
    }

    pub fn jet_coords(&self) -> Vec<CoordId> {
        self.coords.iter().filter(|c| c.is_jet()).cloned().collect()
    }

    pub fn jet_of(&self, a: &CoordId, base: usize) -> Option<CoordId> {
        self.by_role(&Role::jet(a.role(), base))
    }

    /// Coordinate of this chart with the same role as `c`.
    pub fn counterpart(&self, c: &CoordId) -> Option<CoordId> {
        self.by_role(c.role())
    }

    fn filtered(&self, pred: impl Fn(&Role) -> bool) -> Vec<CoordId> {
        self.coords
            .iter()
            .filter(|c| pred(c.role()))
            .cloned()
            .collect()
    }
}

impl CoordLookup for Chart {
    fn by_name(&self, name: &str) -> Option<CoordId> {
        self.coords.iter().find(|c| c.name() == name).cloned()
    }

    fn by_role(&self, role: &Role) -> Option<CoordId> {
        self.coords.iter().find(|c| c.role() == role).cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(c: &Chart) -> Vec<String> {
        c.coords().iter().map(|c| c.name().to_string()).collect()
    }

    #[test]
    fn legendre_charts() {
        let y = Chart::fibred(&["x"], &["y"]).unwrap();
        assert_eq!(names(&y.legendre()), ["x", "y", "p_y"]);
        assert_eq!(y.legendre().kind(), BundleKind::VstarY);
        assert_eq!(names(&y.homogeneous()), ["x", "y", "pp", "p_y"]);
        let y2 = Chart::fibred(&["x0", "x1"], &["y"]).unwrap();
        assert_eq!(
            names(&y2.legendre()),
            ["x0", "x1", "y", "mom(y,x0)", "mom(y,x1)"]
        );
        assert_eq!(y2.homogeneous().kind(), BundleKind::Z);
        let y22 = Chart::fibred(&["x0", "x1"], &["u", "v"]).unwrap();
        assert_eq!(y22.legendre().momenta().len(), 4);
    }

    #[test]
    fn jet_and_primed_charts() {
        let y = Chart::fibred(&["x"], &["y"]).unwrap();
        let j = y.legendre().jet().unwrap();
        assert_eq!(j.kind(), BundleKind::J1Pi);
        assert_eq!(names(&j), ["x", "y", "p_y", "jet(y,x)", "jet(p_y,x)"]);
        let b = y.homogeneous().primed();
        assert_eq!(names(&b), ["x'", "y'", "pp'", "p_y'"]);
    }

    #[test]
    fn rejects_clashes() {
        assert!(matches!(
            Chart::fibred(&["x"], &["x"]),
            Err(GeometryError::InvalidChart(m)) if m.contains("'x'")
        ));
        assert!(Chart::fibred(&["x"], &["pp"]).is_err());
        assert!(Chart::fibred(&[], &["y"]).is_err());
    }
}

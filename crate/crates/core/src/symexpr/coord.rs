use std::fmt;
use std::sync::Arc;

/// What a coordinate means on its bundle chart.
///
/// The derived order (base, fiber, homogeneous momentum, momenta, jets,
/// parameters; then indices) is the chart order used for wedge tuples and
/// the variable order used by the polynomial normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Base(usize),
    Fiber(usize),
    HomogMomentum,
    /// `p^base_fiber`
    Momentum {
        fiber: usize,
        base: usize,
    },
    /// First-order jet coordinate of `of` along base direction `base`.
    Jet {
        of: Box<Role>,
        base: usize,
    },
    /// Free symbol of a solution family; never part of a chart.
    Param(usize),
}

impl Role {
    pub fn jet(of: &Role, base: usize) -> Role {
        Role::Jet {
            of: Box::new(of.clone()),
            base,
        }
    }

    pub fn is_vertical(&self) -> bool {
        !matches!(self, Role::Base(_) | Role::Param(_))
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct CoordData {
    role: Role,
    name: String,
}

/// A named coordinate with its role. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordId(Arc<CoordData>);

impl CoordId {
    pub fn new(name: impl Into<String>, role: Role) -> Self {
        CoordId(Arc::new(CoordData {
            role,
            name: name.into(),
        }))
    }

    /// A free symbol used as an unknown or family parameter.
    pub fn param(name: impl Into<String>, index: usize) -> Self {
        Self::new(name, Role::Param(index))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn role(&self) -> &Role {
        &self.0.role
    }

    pub fn is_base(&self) -> bool {
        matches!(self.role(), Role::Base(_))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self.role(), Role::Jet { .. })
    }

    pub fn is_param(&self) -> bool {
        matches!(self.role(), Role::Param(_))
    }

    pub fn is_homog_momentum(&self) -> bool {
        matches!(self.role(), Role::HomogMomentum)
    }

    pub fn base_index(&self) -> Option<usize> {
        match self.role() {
            Role::Base(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for CoordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for CoordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_order_follows_roles() {
        let x = CoordId::new("x", Role::Base(0));
        let y = CoordId::new("y", Role::Fiber(0));
        let pp = CoordId::new("pp", Role::HomogMomentum);
        let p = CoordId::new("p_y", Role::Momentum { fiber: 0, base: 0 });
        let j = CoordId::new("jet(y,x)", Role::jet(y.role(), 0));
        let mut v = vec![j.clone(), p.clone(), pp.clone(), y.clone(), x.clone()];
        v.sort();
        assert_eq!(v, vec![x, y, pp, p, j]);
    }
}

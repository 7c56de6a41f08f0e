use crate::linear::{self, PivotOrder};
use crate::symexpr::{Bindings, CoordId, Scalar};

use super::forms::TangentValuedForm;
use super::{canonical, BundleKind, Chart, DiffForm, GeometryError};

/// Coordinate change between two charts of the same bundle.
///
/// `forward` gives every target coordinate in source coordinates and
/// `inverse` every source coordinate in target coordinates. Both directions
/// are checked to compose to the identity when the transition is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    source: Chart,
    target: Chart,
    forward: Bindings,
    inverse: Bindings,
}

fn uses_only(e: &Scalar, chart: &Chart) -> Option<CoordId> {
    e.coords().into_iter().find(|c| !chart.contains(c))
}

impl Transition {
    pub fn new(
        source: Chart,
        target: Chart,
        forward: Bindings,
        inverse: Bindings,
    ) -> Result<Transition, GeometryError> {
        if source.kind() != target.kind() {
            return Err(GeometryError::UnverifiedTransition(format!(
                "chart kinds differ: {} vs {}",
                source.kind(),
                target.kind()
            )));
        }
        for (map, dom, cod, what) in [
            (&forward, &target, &source, "forward"),
            (&inverse, &source, &target, "inverse"),
        ] {
            for c in dom.coords() {
                let e = map.get(c).ok_or_else(|| {
                    GeometryError::UnverifiedTransition(format!("{what} map lacks '{c}'"))
                })?;
                if let Some(bad) = uses_only(e, cod) {
                    return Err(GeometryError::UnverifiedTransition(format!(
                        "{what} image of '{c}' uses '{bad}'"
                    )));
                }
                if c.is_base() {
                    if let Some(bad) = e.coords().into_iter().find(|v| !v.is_base()) {
                        return Err(GeometryError::UnverifiedTransition(format!(
                            "base image of '{c}' depends on '{bad}'"
                        )));
                    }
                }
            }
            if map.len() != dom.dim() {
                return Err(GeometryError::UnverifiedTransition(format!(
                    "{what} map has entries outside the chart"
                )));
            }
        }
        for (outer, inner, dom) in [(&inverse, &forward, &source), (&forward, &inverse, &target)] {
            for c in dom.coords() {
                let back = outer[c].substitute(inner).map_err(|_| {
                    GeometryError::UnverifiedTransition("singular composition".into())
                })?;
                if back != Scalar::coord(c) {
                    return Err(GeometryError::UnverifiedTransition(format!(
                        "composition maps '{c}' to '{back}'"
                    )));
                }
            }
        }
        Ok(Transition {
            source,
            target,
            forward,
            inverse,
        })
    }

    pub fn identity(chart: &Chart) -> Transition {
        let map: Bindings = chart
            .coords()
            .iter()
            .map(|c| (c.clone(), Scalar::coord(c)))
            .collect();
        Transition {
            source: chart.clone(),
            target: chart.clone(),
            forward: map.clone(),
            inverse: map,
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn forward(&self) -> &Bindings {
        &self.forward
    }

    pub fn inverse(&self) -> &Bindings {
        &self.inverse
    }

    pub fn reversed(&self) -> Transition {
        Transition {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// Express a target-chart expression in source coordinates.
    pub fn pull(&self, e: &Scalar) -> Scalar {
        e.substitute(&self.forward)
            .expect("verified transitions keep nonzero denominators nonzero")
    }

    /// Express a source-chart expression in target coordinates.
    pub fn push(&self, e: &Scalar) -> Scalar {
        e.substitute(&self.inverse)
            .expect("verified transitions keep nonzero denominators nonzero")
    }

    pub fn pull_form(&self, form: &DiffForm) -> DiffForm {
        form.pullback(&self.forward)
            .expect("verified transitions keep nonzero denominators nonzero")
    }

    /// `∂x'^λ/∂x^μ` in source coordinates, indexed `[λ][μ]`.
    pub fn base_jacobian(&self) -> Vec<Vec<Scalar>> {
        let n = self.source.base_dim();
        (0..n)
            .map(|l| {
                let img = &self.forward[&self.target.base(l)];
                (0..n).map(|m| img.diff(&self.source.base(m))).collect()
            })
            .collect()
    }

    /// `det(∂x'/∂x)` in source coordinates.
    pub fn base_jacobian_det(&self) -> Scalar {
        linear::determinant(&self.base_jacobian())
    }

    /// `∂x^μ/∂x'^λ` in source coordinates, indexed `[μ][λ]`.
    pub fn inverse_base_jacobian(&self) -> Vec<Vec<Scalar>> {
        let n = self.source.base_dim();
        (0..n)
            .map(|m| {
                let img = &self.inverse[&self.source.base(m)];
                (0..n)
                    .map(|l| self.pull(&img.diff(&self.target.base(l))))
                    .collect()
            })
            .collect()
    }

    fn on_kind(&self, kind: BundleKind) -> Result<(Chart, Chart), GeometryError> {
        Ok((self.source.of_kind(kind)?, self.target.of_kind(kind)?))
    }
}

/// Partial pullback: substitute only the listed target coordinates.
fn pull_partial(form: &DiffForm, t: &Transition) -> Result<DiffForm, GeometryError> {
    Ok(form.pullback(t.forward())?)
}

/// Solve `eqs = 0` for the unknown target coordinates, which must be fixed
/// uniquely.
fn solve_unique(eqs: &[Scalar], unknowns: &[CoordId]) -> Result<Bindings, GeometryError> {
    let (a, b) = linear::extract(eqs, unknowns)?;
    let sol = linear::solve(&a, &b, unknowns.len(), PivotOrder::First)?;
    if !sol.free.is_empty() {
        return Err(GeometryError::SingularJacobian);
    }
    Ok(unknowns.iter().cloned().zip(sol.particular()).collect())
}

fn coefficient_equations(form: &DiffForm) -> Vec<Scalar> {
    form.terms().map(|(_, c)| c.clone()).collect()
}

/// Momentum images on the homogeneous chart from `Ξ' = Ξ`.
fn homogeneous_momenta(t: &Transition) -> Result<Bindings, GeometryError> {
    let (src, tgt) = t.on_kind(t.source.homogeneous().kind())?;
    let mut unknowns = tgt.momenta();
    unknowns.extend(tgt.homog_momentum());
    let pulled = pull_partial(&canonical::liouville_form(&tgt)?, t)?;
    let diff = pulled.sub(&canonical::liouville_form(&src)?);
    solve_unique(&coefficient_equations(&diff), &unknowns)
}

/// Jet images on `J¹Y` from the contact conditions.
fn contact_jets(t: &Transition) -> Result<Bindings, GeometryError> {
    let (src, tgt) = t.on_kind(BundleKind::J1Y)?;
    let n = src.base_dim();
    let mut eqs = Vec::new();
    for i in 0..tgt.fiber_dim() {
        let theta = canonical::contact_form(&tgt, i)?;
        let pulled = pull_partial(&theta, t)?;
        for mu in 0..n {
            let mut e = pulled.coefficient(&[src.base(mu)]);
            for j in 0..src.fiber_dim() {
                let yj = src.fiber(j);
                let jet = src.jet_of(&yj, mu).expect("jet chart");
                e = e + pulled.coefficient(&[yj]) * Scalar::coord(&jet);
            }
            eqs.push(e);
        }
    }
    solve_unique(&eqs, &tgt.jet_coords())
}

fn extended(
    t: &Transition,
    kind: BundleKind,
    fwd: Bindings,
    inv: Bindings,
) -> Result<Transition, GeometryError> {
    let (src, tgt) = t.on_kind(kind)?;
    let mut forward = t.forward.clone();
    forward.extend(fwd);
    let mut inverse = t.inverse.clone();
    inverse.extend(inv);
    forward.retain(|c, _| tgt.contains(c));
    inverse.retain(|c, _| src.contains(c));
    Transition::new(src, tgt, forward, inverse)
}

/// Lift a fibred transition on `Y` to the requested bundle. Momentum laws
/// come from invariance of the Liouville form, jet laws from the contact
/// conditions; the defining canonical object is then checked to pull back to
/// itself.
pub fn induced_transition(t: &Transition, kind: BundleKind) -> Result<Transition, GeometryError> {
    if t.source.kind() != BundleKind::Y {
        return Err(GeometryError::UnsupportedKind(t.source.kind()));
    }
    let lifted = match kind {
        BundleKind::Y => return Ok(t.clone()),
        BundleKind::TstarY | BundleKind::Z | BundleKind::VstarY | BundleKind::Pi => {
            let fwd = homogeneous_momenta(t)?;
            let inv = homogeneous_momenta(&t.reversed())?;
            extended(t, kind, fwd, inv)?
        }
        BundleKind::J1Y => {
            let fwd = contact_jets(t)?;
            let inv = contact_jets(&t.reversed())?;
            extended(t, kind, fwd, inv)?
        }
        k => return Err(GeometryError::UnsupportedKind(k)),
    };
    verify_canonical(&lifted)?;
    Ok(lifted)
}

fn verify_canonical(t: &Transition) -> Result<(), GeometryError> {
    let (src, tgt) = (t.source(), t.target());
    let ok = match src.kind() {
        BundleKind::TstarY | BundleKind::Z => {
            t.pull_form(&canonical::liouville_form(tgt)?) == canonical::liouville_form(src)?
        }
        BundleKind::VstarY | BundleKind::Pi => {
            pull_tangent_valued(t, &canonical::polysymplectic_form(tgt)?)
                .same_tensor(&canonical::polysymplectic_form(src)?)
        }
        BundleKind::J1Y => (0..tgt.fiber_dim()).all(|i| {
            let pulled = t.pull_form(&canonical::contact_form(tgt, i).expect("jet chart"));
            let mut rest = pulled.clone();
            for j in 0..src.fiber_dim() {
                let a = pulled.coefficient(&[src.fiber(j)]);
                rest = rest.sub(
                    &canonical::contact_form(src, j)
                        .expect("jet chart")
                        .scale(&a),
                );
            }
            rest.is_zero()
        }),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(GeometryError::UnverifiedTransition(format!(
            "canonical structure on {} is not preserved",
            src.kind()
        )))
    }
}

/// Pull back a form valued in base tangent vectors: the form parts are pulled
/// back and `∂'_λ = (∂x^μ/∂x'^λ) ∂_μ`.
pub fn pull_tangent_valued(t: &Transition, v: &TangentValuedForm) -> TangentValuedForm {
    let inv_jac = t.inverse_base_jacobian();
    let mut terms = Vec::new();
    for (form, c) in v.terms() {
        let pulled = t.pull_form(form);
        let l = c
            .base_index()
            .expect("tangent directions are base directions");
        for (mu, row) in inv_jac.iter().enumerate() {
            let k = &row[l];
            if !k.is_zero() {
                terms.push((pulled.scale(k), t.source().base(mu)));
            }
        }
    }
    TangentValuedForm::new(terms).expect("degrees are preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse_scalar;

    fn y_transition(fwd: &[&str], inv: &[&str]) -> Transition {
        let a = Chart::fibred(&["x"], &["y"]).unwrap();
        let b = a.primed();
        let forward = b
            .coords()
            .iter()
            .zip(fwd)
            .map(|(c, t)| (c.clone(), parse_scalar(t, &a).unwrap()))
            .collect();
        let inverse = a
            .coords()
            .iter()
            .zip(inv)
            .map(|(c, t)| (c.clone(), parse_scalar(t, &b).unwrap()))
            .collect();
        Transition::new(a, b, forward, inverse).unwrap()
    }

    fn image(t: &Transition, name: &str) -> String {
        let c = t
            .target()
            .coords()
            .iter()
            .find(|c| c.name() == name)
            .unwrap();
        t.forward()[c].to_string()
    }

    #[test]
    fn translation_fixes_momenta() {
        let t = y_transition(&["x + 3", "y"], &["x' - 3", "y'"]);
        let z = induced_transition(&t, BundleKind::TstarY).unwrap();
        assert_eq!(image(&z, "pp'"), "pp");
        assert_eq!(image(&z, "p_y'"), "p_y");
    }

    #[test]
    fn rescaled_base_halves_pp() {
        let t = y_transition(&["2*x", "y"], &["x'/2", "y'"]);
        let z = induced_transition(&t, BundleKind::TstarY).unwrap();
        assert_eq!(image(&z, "pp'"), "1/2*pp");
        assert_eq!(image(&z, "p_y'"), "p_y");
    }

    #[test]
    fn rescaled_fiber_on_vertical_cotangent() {
        let t = y_transition(&["x", "2*y"], &["x'", "y'/2"]);
        let v = induced_transition(&t, BundleKind::VstarY).unwrap();
        assert_eq!(image(&v, "p_y'"), "1/2*p_y");
        assert!(induced_transition(&t, BundleKind::Pi).is_err());
    }

    #[test]
    fn shear_and_jets() {
        let t = y_transition(&["x", "y + x^2"], &["x'", "y' - x'^2"]);
        let z = induced_transition(&t, BundleKind::TstarY).unwrap();
        assert_eq!(image(&z, "pp'"), "-2*x*p_y + pp");
        let j = induced_transition(&t, BundleKind::J1Y).unwrap();
        assert_eq!(image(&j, "jet(y',x')"), "2*x + jet(y,x)");
    }

    #[test]
    fn rejects_bad_inverse() {
        let a = Chart::fibred(&["x"], &["y"]).unwrap();
        let b = a.primed();
        let forward: Bindings = b
            .coords()
            .iter()
            .zip(["2*x", "y"])
            .map(|(c, t)| (c.clone(), parse_scalar(t, &a).unwrap()))
            .collect();
        let inverse: Bindings = a
            .coords()
            .iter()
            .zip(["x'", "y'"])
            .map(|(c, t)| (c.clone(), parse_scalar(t, &b).unwrap()))
            .collect();
        assert!(matches!(
            Transition::new(a, b, forward, inverse),
            Err(GeometryError::UnverifiedTransition(_))
        ));
    }
}

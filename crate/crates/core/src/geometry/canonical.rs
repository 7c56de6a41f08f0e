//! Canonical forms on Legendre and jet charts.

use crate::symexpr::Scalar;

use super::forms::{contract, MultiVector, TangentValuedForm};
use super::{BundleKind, Chart, DiffForm, GeometryError};

/// `ω = dx^0 ∧ … ∧ dx^{n-1}`.
pub fn volume_form(chart: &Chart) -> DiffForm {
    DiffForm::term(Scalar::one(), chart.base_coords())
}

/// `ω_λ = ∂_λ ⌟ ω`.
pub fn volume_contraction(chart: &Chart, l: usize) -> DiffForm {
    contract(&MultiVector::partial(&chart.base(l)), &volume_form(chart))
        .expect("a vector contracts into a top base form")
}

/// `p^λ_i dy^i ∧ ω_λ`.
pub fn momentum_form(chart: &Chart) -> DiffForm {
    let mut out = DiffForm::zero(chart.base_dim());
    for i in 0..chart.fiber_dim() {
        let dy = DiffForm::differential_of(&chart.fiber(i));
        for l in 0..chart.base_dim() {
            let p = chart.momentum(i, l).expect("momentum chart");
            let term = dy.wedge(&volume_contraction(chart, l));
            out = out.add(&term.scale(&Scalar::coord(&p)));
        }
    }
    out
}

/// Liouville form `Ξ = p ω + p^λ_i dy^i ∧ ω_λ` on the homogeneous Legendre
/// bundle.
pub fn liouville_form(chart: &Chart) -> Result<DiffForm, GeometryError> {
    let pp = match chart.kind() {
        BundleKind::TstarY | BundleKind::Z => chart.homog_momentum().expect("homogeneous chart"),
        k => return Err(GeometryError::UnsupportedKind(k)),
    };
    Ok(volume_form(chart)
        .scale(&Scalar::coord(&pp))
        .add(&momentum_form(chart)))
}

/// `Ω = dΞ`.
pub fn multisymplectic_form(chart: &Chart) -> Result<DiffForm, GeometryError> {
    Ok(liouville_form(chart)?.d())
}

/// `Ω_Π = dp^λ_i ∧ dy^i ∧ ω ⊗ ∂_λ`.
pub fn polysymplectic_form(chart: &Chart) -> Result<TangentValuedForm, GeometryError> {
    if !chart.kind().is_legendre() {
        return Err(GeometryError::UnsupportedKind(chart.kind()));
    }
    let omega = volume_form(chart);
    let mut terms = Vec::new();
    for i in 0..chart.fiber_dim() {
        let dy = DiffForm::differential_of(&chart.fiber(i));
        for l in 0..chart.base_dim() {
            let p = chart.momentum(i, l).expect("legendre chart");
            let dp = DiffForm::differential_of(&p);
            terms.push((dp.wedge(&dy).wedge(&omega), chart.base(l)));
        }
    }
    Ok(TangentValuedForm::new(terms).expect("uniform degree"))
}

/// Contact form `θ^i = dy^i − y^i_λ dx^λ` on `J¹Y`.
pub fn contact_form(chart: &Chart, i: usize) -> Result<DiffForm, GeometryError> {
    if chart.kind() != BundleKind::J1Y {
        return Err(GeometryError::UnsupportedKind(chart.kind()));
    }
    let y = chart.fiber(i);
    let mut out = DiffForm::differential_of(&y);
    for l in 0..chart.base_dim() {
        let jet = chart.jet_of(&y, l).expect("jet chart");
        out = out.sub(&DiffForm::differential_of(&chart.base(l)).scale(&Scalar::coord(&jet)));
    }
    Ok(out)
}

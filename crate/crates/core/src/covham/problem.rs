use crate::geometry::{canonical, BundleKind, Chart, DiffForm, TangentValuedForm};
use crate::symexpr::{CoordId, Scalar};

use super::CovhamError;

fn check_support(e: &Scalar, chart: &Chart) -> Result<(), CovhamError> {
    match e.coords().into_iter().find(|c| !chart.contains(c)) {
        Some(c) => Err(CovhamError::ForbiddenCoordinate(c.name().to_string())),
        None => Ok(()),
    }
}

/// Hamiltonian density `𝓗` on a Legendre chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSpec {
    chart: Chart,
    density: Scalar,
}

impl HamiltonianSpec {
    pub fn new(chart: &Chart, density: Scalar) -> Result<HamiltonianSpec, CovhamError> {
        if !chart.kind().is_legendre() {
            return Err(CovhamError::WrongChart {
                expected: "Legendre",
                found: chart.kind(),
            });
        }
        check_support(&density, chart)?;
        Ok(HamiltonianSpec {
            chart: chart.clone(),
            density,
        })
    }

    /// The Legendre chart `Π` (`V*Y` when n = 1).
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn density(&self) -> &Scalar {
        &self.density
    }

    /// The homogeneous chart `Z` (`T*Y` when n = 1).
    pub fn homogeneous_chart(&self) -> Chart {
        self.chart.homogeneous()
    }

    pub(crate) fn require_one_dimensional(&self) -> Result<(), CovhamError> {
        if self.chart.base_dim() == 1 {
            Ok(())
        } else {
            Err(CovhamError::NeedsOneDimensionalBase)
        }
    }
}

/// Lagrangian density `𝓛` on `J¹Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianSpec {
    chart: Chart,
    density: Scalar,
}

impl LagrangianSpec {
    pub fn new(chart: &Chart, density: Scalar) -> Result<LagrangianSpec, CovhamError> {
        if chart.kind() != BundleKind::J1Y {
            return Err(CovhamError::WrongChart {
                expected: "J1Y",
                found: chart.kind(),
            });
        }
        check_support(&density, chart)?;
        Ok(LagrangianSpec {
            chart: chart.clone(),
            density,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn density(&self) -> &Scalar {
        &self.density
    }
}

fn require_y(chart: &Chart) -> Result<(), CovhamError> {
    if chart.kind() == BundleKind::Y {
        Ok(())
    } else {
        Err(CovhamError::WrongChart {
            expected: "Y",
            found: chart.kind(),
        })
    }
}

pub fn legendre_bundle_chart(y: &Chart) -> Result<Chart, CovhamError> {
    require_y(y)?;
    Ok(y.legendre())
}

pub fn homogeneous_chart(y: &Chart) -> Result<Chart, CovhamError> {
    require_y(y)?;
    Ok(y.homogeneous())
}

/// Fiber derivative `p^λ_i = ∂𝓛/∂y^i_λ`, in momentum order.
pub fn legendre_map(l: &LagrangianSpec) -> Vec<(CoordId, Scalar)> {
    let pi = l.chart.legendre();
    let mut out = Vec::new();
    for i in 0..pi.fiber_dim() {
        for lam in 0..pi.base_dim() {
            let p = pi.momentum(i, lam).expect("legendre chart");
            let jet = l.chart.jet_of(&l.chart.fiber(i), lam).expect("jet chart");
            out.push((p, l.density.diff(&jet)));
        }
    }
    out
}

pub fn polysymplectic_form(chart: &Chart) -> Result<TangentValuedForm, CovhamError> {
    Ok(canonical::polysymplectic_form(chart)?)
}

pub fn liouville_form(chart: &Chart) -> Result<DiffForm, CovhamError> {
    Ok(canonical::liouville_form(chart)?)
}

pub fn multisymplectic_form(chart: &Chart) -> Result<DiffForm, CovhamError> {
    Ok(canonical::multisymplectic_form(chart)?)
}

/// `H = p^λ_i dy^i ∧ ω_λ − 𝓗 ω` on the Legendre chart.
pub fn hamiltonian_form(h: &HamiltonianSpec) -> DiffForm {
    canonical::momentum_form(&h.chart).sub(&canonical::volume_form(&h.chart).scale(&h.density))
}

/// Pullback along `ζ: Z → Π`. The map only forgets `pp`, so an expression
/// on `Π` reads unchanged on `Z`.
pub fn zeta_pullback(f: &Scalar) -> Scalar {
    f.clone()
}

/// `H* = Ξ − ζ*H`, which equals `(pp + 𝓗) ω`.
pub fn multisymplectic_hamiltonian_density(h: &HamiltonianSpec) -> DiffForm {
    let z = h.homogeneous_chart();
    canonical::liouville_form(&z)
        .expect("homogeneous chart")
        .sub(&hamiltonian_form(h))
}

/// `𝓔 = ρ⁻¹ (pp + 𝓗)` for a base density `ρ ω`.
pub fn energy_function(rho: &Scalar, h: &HamiltonianSpec) -> Result<Scalar, CovhamError> {
    if rho.is_zero() || rho.coords().iter().any(|c| !c.is_base()) {
        return Err(CovhamError::BadDensity);
    }
    let z = h.homogeneous_chart();
    let pp = Scalar::coord(&z.homog_momentum().expect("homogeneous chart"));
    Ok((pp + h.density()).checked_div(rho)?)
}

use std::collections::BTreeSet;

use crate::geometry::{horizontal_differential, Chart, HorizontalOneForm};
use crate::symexpr::{CoordId, Scalar};

use super::connections::hamilton_shell;
use super::{
    canonical_bracket, energy_function, hamiltonian_connection_polysymplectic,
    multisymplectic_hamiltonian_density, solve_hamiltonian_connection, vertical_bracket,
    CovhamError, HamiltonianSpec,
};

fn on_chart(f: &Scalar, chart: &Chart) -> Result<(), CovhamError> {
    match f.coords().into_iter().find(|c| !chart.contains(c)) {
        Some(c) if c.is_homog_momentum() => Err(CovhamError::DependsOnHomogeneousMomentum),
        Some(c) => Err(CovhamError::ForbiddenCoordinate(c.name().to_string())),
        None => Ok(()),
    }
}

/// `d_γ f = (∂_x f + {𝓗, f}_V) dx` for the Hamiltonian connection on `V*Y`.
pub fn evolution_operator_v(
    h: &HamiltonianSpec,
    f: &Scalar,
) -> Result<HorizontalOneForm, CovhamError> {
    h.require_one_dimensional()?;
    on_chart(f, h.chart())?;
    let conn = hamiltonian_connection_polysymplectic(h).connection();
    let d = conn.evolution_operator(f)?;
    debug_assert_eq!(
        *d.component(0),
        f.diff(&h.chart().base(0)) + vertical_bracket(h.chart(), h.density(), f)?
    );
    Ok(d)
}

/// Which of the `T*Y` identities held for an evolution operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TIdentities {
    /// `d_γ f = {pp + 𝓗, f} dx`
    pub canonical_bracket: bool,
    /// `d_γ f = ρ {𝓔, f} dx`
    pub rho_bracket: bool,
    /// The result does not involve the free coefficient `γ^p`.
    pub gamma_p_independent: bool,
}

impl TIdentities {
    pub fn all(&self) -> bool {
        self.canonical_bracket && self.rho_bracket && self.gamma_p_independent
    }
}

/// Evolution operator of the Hamiltonian connections on `T*Y` applied to a
/// function pulled back from `V*Y`, checked against both bracket forms.
pub fn evolution_operator_t(
    h: &HamiltonianSpec,
    f: &Scalar,
    rho: &Scalar,
) -> Result<(HorizontalOneForm, TIdentities), CovhamError> {
    h.require_one_dimensional()?;
    on_chart(f, h.chart())?;
    let z = h.homogeneous_chart();
    let family = solve_hamiltonian_connection(&multisymplectic_hamiltonian_density(h), &z)?;
    let d = family.connection().evolution_operator(f)?;
    let value = d.component(0);
    let pp = Scalar::coord(&z.homog_momentum().expect("homogeneous chart"));
    let energy = energy_function(rho, h)?;
    let report = TIdentities {
        canonical_bracket: *value == canonical_bracket(&z, &(pp + h.density()), f)?,
        rho_bracket: *value == rho * canonical_bracket(&z, &energy, f)?,
        gamma_p_independent: family.params().iter().all(|p| !value.depends_on(p)),
    };
    Ok((d, report))
}

/// Horizontal differential restricted by the Hamilton equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionReport {
    pub components: HorizontalOneForm,
    pub residual_jets: BTreeSet<CoordId>,
}

impl EvolutionReport {
    /// True when no jet coordinate survives, i.e. the operator acts on
    /// functions on `Π`.
    pub fn is_function_operator(&self) -> bool {
        self.residual_jets.is_empty()
    }
}

pub fn evolution_operator_poly(
    h: &HamiltonianSpec,
    f: &Scalar,
) -> Result<EvolutionReport, CovhamError> {
    on_chart(f, h.chart())?;
    let jet = h.chart().jet()?;
    let shell = hamilton_shell(h);
    let components = horizontal_differential(&jet, f)?.try_map(|c| c.substitute(&shell))?;
    let residual_jets = components
        .components()
        .iter()
        .flat_map(|c| c.coords())
        .filter(CoordId::is_jet)
        .collect();
    Ok(EvolutionReport {
        components,
        residual_jets,
    })
}

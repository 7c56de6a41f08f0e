//! Chart-gluing checks over two-chart atlases.

use std::fmt;

use thiserror::Error;

use crate::covham::{
    canonical_bracket, energy_function, evolution_operator_v, vertical_bracket, CovhamError,
    HamiltonianSpec,
};
use crate::geometry::{
    induced_transition, BundleKind, Chart, GeometryError, HorizontalOneForm, Transition,
};
use crate::symexpr::{Bindings, ExprError, Role, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobalityError {
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Covham(#[from] CovhamError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Two charts of `Y` with a verified transition, plus its lifts to the
/// Legendre, homogeneous Legendre and jet bundles.
#[derive(Clone, Debug)]
pub struct Atlas {
    transition: Transition,
    induced: Vec<(BundleKind, Transition)>,
}

impl Atlas {
    pub fn new(transition: Transition) -> Result<Atlas, GlobalityError> {
        if transition.source().kind() != BundleKind::Y {
            return Err(GlobalityError::ChartMismatch(
                "atlas transitions are given on Y".into(),
            ));
        }
        let y = transition.source();
        let mut induced = vec![(BundleKind::Y, transition.clone())];
        for kind in [y.legendre().kind(), y.homogeneous().kind(), BundleKind::J1Y] {
            induced.push((kind, induced_transition(&transition, kind)?));
        }
        Ok(Atlas {
            transition,
            induced,
        })
    }

    /// A single chart seen as an atlas: the second chart is a primed copy
    /// with the identity transition.
    pub fn trivial(y: &Chart) -> Result<Atlas, GlobalityError> {
        let b = y.primed();
        let forward: Bindings = b
            .coords()
            .iter()
            .zip(y.coords())
            .map(|(cb, ca)| (cb.clone(), Scalar::coord(ca)))
            .collect();
        let inverse: Bindings = y
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(ca, cb)| (ca.clone(), Scalar::coord(cb)))
            .collect();
        Atlas::new(Transition::new(y.clone(), b, forward, inverse)?)
    }

    pub fn chart_a(&self) -> &Chart {
        self.transition.source()
    }

    pub fn chart_b(&self) -> &Chart {
        self.transition.target()
    }

    pub fn transition(&self) -> &Transition {
        &self.transition
    }

    pub fn induced(&self, kind: BundleKind) -> Result<&Transition, GlobalityError> {
        self.induced
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, t)| t)
            .ok_or(GlobalityError::Geometry(GeometryError::UnsupportedKind(
                kind,
            )))
    }

    /// The same atlas with the roles of the charts exchanged.
    pub fn reversed(&self) -> Atlas {
        Atlas {
            transition: self.transition.reversed(),
            induced: self
                .induced
                .iter()
                .map(|(k, t)| (*k, t.reversed()))
                .collect(),
        }
    }

    /// Smallest bundle of the atlas carrying every coordinate of `e`.
    fn kind_of(&self, e: &Scalar) -> Result<BundleKind, GlobalityError> {
        let coords = e.coords();
        let has = |pred: fn(&Role) -> bool| coords.iter().any(|c| pred(c.role()));
        let y = self.chart_a();
        let jets = has(|r| matches!(r, Role::Jet { .. }));
        let kind = if has(|r| matches!(r, Role::HomogMomentum)) {
            y.homogeneous().kind()
        } else if has(|r| matches!(r, Role::Momentum { .. })) {
            y.legendre().kind()
        } else if jets {
            BundleKind::J1Y
        } else {
            BundleKind::Y
        };
        if jets && kind != BundleKind::J1Y {
            return Err(GlobalityError::ChartMismatch(
                "jets of Legendre coordinates are not covered by the atlas".into(),
            ));
        }
        Ok(kind)
    }

    fn transition_for(&self, a: &Scalar, b: &Scalar) -> Result<&Transition, GlobalityError> {
        let t = self.induced(self.kind_of(a)?.max(self.kind_of_b(b)?))?;
        for (e, chart, label) in [(a, t.source(), "first"), (b, t.target(), "second")] {
            if let Some(c) = e.coords().into_iter().find(|c| !chart.contains(c)) {
                return Err(GlobalityError::ChartMismatch(format!(
                    "'{c}' is not a coordinate of the {label} chart"
                )));
            }
        }
        Ok(t)
    }

    fn kind_of_b(&self, e: &Scalar) -> Result<BundleKind, GlobalityError> {
        self.reversed().kind_of(e)
    }

    /// Express a chart-A function in chart-B coordinates.
    pub fn push_function(&self, f: &Scalar) -> Result<Scalar, GlobalityError> {
        Ok(self.induced(self.kind_of(f)?)?.push(f))
    }

    /// `det(∂x'/∂x)` in chart-A coordinates.
    pub fn jacobian(&self) -> Scalar {
        self.transition.base_jacobian_det()
    }

    /// The coefficient of the density `ρ ω` in chart B.
    pub fn push_density(&self, rho: &Scalar) -> Result<Scalar, GlobalityError> {
        Ok(self.transition.push(&rho.checked_div(&self.jacobian())?))
    }

    /// `𝓗` in chart B, read off the section `pp = −𝓗` through the
    /// homogeneous Legendre transition.
    pub fn push_hamiltonian(&self, h: &HamiltonianSpec) -> Result<HamiltonianSpec, GlobalityError> {
        let z = self.induced(self.chart_a().homogeneous().kind())?;
        let pp_a = z.source().homog_momentum().expect("homogeneous chart");
        let pp_b = z.target().homog_momentum().expect("homogeneous chart");
        let on_section = z.forward()[&pp_b].subs1(&pp_a, &(-h.density()))?;
        let density_b = z.push(&-on_section);
        Ok(HamiltonianSpec::new(&self.chart_b().legendre(), density_b)?)
    }
}

/// An object given by one representation per chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerChartObject<T> {
    pub in_a: T,
    pub in_b: T,
}

impl<T> PerChartObject<T> {
    pub fn new(in_a: T, in_b: T) -> Self {
        PerChartObject { in_a, in_b }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Global,
    /// Chart-A representation minus the pulled-back chart-B one, per
    /// component.
    NotGlobal {
        discrepancy: Vec<Scalar>,
    },
}

impl Verdict {
    fn from_discrepancy(d: Vec<Scalar>) -> Verdict {
        if d.iter().all(Scalar::is_zero) {
            Verdict::Global
        } else {
            Verdict::NotGlobal { discrepancy: d }
        }
    }

    pub fn is_global(&self) -> bool {
        matches!(self, Verdict::Global)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Global => "global",
            Verdict::NotGlobal { .. } => "notGlobal",
        }
    }

    pub fn detail(&self) -> Option<String> {
        match self {
            Verdict::Global => None,
            Verdict::NotGlobal { discrepancy } => Some(format!(
                "discrepancy {}",
                discrepancy
                    .iter()
                    .map(Scalar::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())?;
        if let Some(d) = self.detail() {
            write!(f, ", {d}")?;
        }
        Ok(())
    }
}

/// Global iff the chart-B function pulled back to chart A is the chart-A
/// function.
pub fn check_global_function(
    obj: &PerChartObject<Scalar>,
    atlas: &Atlas,
) -> Result<Verdict, GlobalityError> {
    let t = atlas.transition_for(&obj.in_a, &obj.in_b)?;
    Ok(Verdict::from_discrepancy(vec![
        &obj.in_a - t.pull(&obj.in_b),
    ]))
}

/// Global iff the coefficients of `ρ ω` satisfy `ρ_A = ρ_B det(∂x'/∂x)`.
pub fn check_global_density(
    obj: &PerChartObject<Scalar>,
    atlas: &Atlas,
) -> Result<Verdict, GlobalityError> {
    let t = atlas.transition_for(&obj.in_a, &obj.in_b)?;
    let pulled = t.pull(&obj.in_b) * atlas.jacobian();
    Ok(Verdict::from_discrepancy(vec![&obj.in_a - pulled]))
}

/// Global iff `f_μ = f'_λ ∂x'^λ/∂x^μ` after substitution.
pub fn check_global_horizontal_form(
    obj: &PerChartObject<HorizontalOneForm>,
    atlas: &Atlas,
) -> Result<Verdict, GlobalityError> {
    let n = atlas.chart_a().base_dim();
    if obj.in_a.components().len() != n || obj.in_b.components().len() != n {
        return Err(GlobalityError::ChartMismatch(
            "wrong number of components".into(),
        ));
    }
    let jac = atlas.transition.base_jacobian();
    let mut discrepancy = Vec::with_capacity(n);
    for mu in 0..n {
        let mut pulled = Scalar::zero();
        for (lam, row) in jac.iter().enumerate() {
            let (a, b) = (obj.in_a.component(mu), obj.in_b.component(lam));
            let t = atlas.transition_for(a, b)?;
            pulled = pulled + t.pull(b) * &row[mu];
        }
        discrepancy.push(obj.in_a.component(mu) - pulled);
    }
    Ok(Verdict::from_discrepancy(discrepancy))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitDensity {
    Exists,
    Fails {
        jacobian: Scalar,
        orientation_reversing: bool,
    },
}

impl UnitDensity {
    pub fn label(&self) -> &'static str {
        match self {
            UnitDensity::Exists => "unitDensityExists",
            UnitDensity::Fails { .. } => "fails",
        }
    }

    pub fn detail(&self) -> Option<String> {
        match self {
            UnitDensity::Exists => None,
            UnitDensity::Fails {
                jacobian,
                orientation_reversing,
            } => Some(if *orientation_reversing {
                format!("jacobian {jacobian} (orientation-reversing)")
            } else {
                format!("jacobian {jacobian}")
            }),
        }
    }
}

impl fmt::Display for UnitDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())?;
        if let Some(d) = self.detail() {
            write!(f, ", {d}")?;
        }
        Ok(())
    }
}

/// `ρ = 1` in both charts is consistent iff the base Jacobian is one.
pub fn check_unit_density(atlas: &Atlas) -> UnitDensity {
    let j = atlas.jacobian();
    if j.is_one() {
        return UnitDensity::Exists;
    }
    let orientation_reversing = j
        .as_rational()
        .is_some_and(|k| k < num_rational::BigRational::from_integer(0.into()));
    UnitDensity::Fails {
        jacobian: j,
        orientation_reversing,
    }
}

/// Verdicts and per-chart identities for the objects built from `𝓗`, `f`
/// and a density `ρ ω` on a one-dimensional base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalityReport {
    pub verdicts: Vec<(String, Verdict)>,
    /// Identities checked in both charts.
    pub identities: Vec<(String, bool)>,
    pub unit_density: UnitDensity,
}

impl GlobalityReport {
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn identity(&self, name: &str) -> Option<bool> {
        self.identities
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }
}

struct ChartData {
    evolution: HorizontalOneForm,
    split: Scalar,
    pp_plus_h: Scalar,
    energy: Scalar,
    energy_bracket: Scalar,
    canonical_form: Scalar,
}

fn chart_data(h: &HamiltonianSpec, f: &Scalar, rho: &Scalar) -> Result<ChartData, GlobalityError> {
    let z = h.homogeneous_chart();
    let pp = Scalar::coord(&z.homog_momentum().expect("homogeneous chart"));
    let pp_plus_h = pp + h.density();
    let energy = energy_function(rho, h)?;
    Ok(ChartData {
        evolution: evolution_operator_v(h, f)?,
        split: vertical_bracket(h.chart(), h.density(), f)?,
        canonical_form: canonical_bracket(&z, &pp_plus_h, f)?,
        energy_bracket: canonical_bracket(&z, &energy, f)?,
        pp_plus_h,
        energy,
    })
}

pub fn globality_report(
    h: &HamiltonianSpec,
    f: &Scalar,
    rho: &Scalar,
    atlas: &Atlas,
) -> Result<GlobalityReport, GlobalityError> {
    if h.chart().base_dim() != 1 {
        return Err(CovhamError::NeedsOneDimensionalBase.into());
    }
    if h.chart().y_chart() != *atlas.chart_a() {
        return Err(GlobalityError::ChartMismatch(
            "Hamiltonian is not given on the first chart".into(),
        ));
    }
    let h_b = atlas.push_hamiltonian(h)?;
    let f_b = atlas.push_function(f)?;
    let rho_b = atlas.push_density(rho)?;
    let a = chart_data(h, f, rho)?;
    let b = chart_data(&h_b, &f_b, &rho_b)?;
    let pair = |x: &Scalar, y: &Scalar| PerChartObject::new(x.clone(), y.clone());
    let verdicts = vec![
        (
            "hamiltonian".to_string(),
            check_global_function(&pair(h.density(), h_b.density()), atlas)?,
        ),
        (
            "bracket-split".to_string(),
            check_global_function(&pair(&a.split, &b.split), atlas)?,
        ),
        (
            "evolution-form".to_string(),
            check_global_horizontal_form(
                &PerChartObject::new(a.evolution.clone(), b.evolution.clone()),
                atlas,
            )?,
        ),
        (
            "pp+H as function".to_string(),
            check_global_function(&pair(&a.pp_plus_h, &b.pp_plus_h), atlas)?,
        ),
        (
            "pp+H as density".to_string(),
            check_global_density(&pair(&a.pp_plus_h, &b.pp_plus_h), atlas)?,
        ),
        (
            "energy-function".to_string(),
            check_global_function(&pair(&a.energy, &b.energy), atlas)?,
        ),
        (
            "energy-bracket".to_string(),
            check_global_function(&pair(&a.energy_bracket, &b.energy_bracket), atlas)?,
        ),
    ];
    let both = |test: &dyn Fn(&ChartData, &Scalar) -> bool| test(&a, rho) && test(&b, &rho_b);
    let canonical = both(&|d, _| *d.evolution.component(0) == d.canonical_form);
    let identities = vec![
        ("evolution = {pp+H,f} dx".to_string(), canonical),
        (
            "evolution = rho {E,f} dx".to_string(),
            both(&|d, r| *d.evolution.component(0) == r * &d.energy_bracket),
        ),
        (
            "evolution = {E,f} dx".to_string(),
            both(&|d, _| *d.evolution.component(0) == d.energy_bracket),
        ),
        (
            "bracket reduction global".to_string(),
            canonical && verdicts[3].1.is_global(),
        ),
    ];
    Ok(GlobalityReport {
        verdicts,
        identities,
        unit_density: check_unit_density(atlas),
    })
}

use covhamkit::covham::{
    canonical_bracket, energy_function, evolution_operator_poly, evolution_operator_t,
    evolution_operator_v, hamilton_equations, hamiltonian_form, is_dynamic_equation, legendre_map,
    liouville_form, multisymplectic_form, multisymplectic_hamiltonian_density, polysymplectic_form,
    vertical_bracket, HamiltonianSpec, LagrangianSpec,
};
use covhamkit::geometry::HorizontalOneForm;
use covhamkit::globality::{globality_report, Atlas};
use covhamkit::symexpr::{parse_in_scope, Scalar, Scope};

use crate::output::{RunResult, VerdictEntry};
use crate::spec::ProblemSpec;
use crate::{BracketKind, CliError, Object, Via};

fn hamiltonian(spec: &ProblemSpec) -> Result<HamiltonianSpec, CliError> {
    let d = spec
        .hamiltonian
        .as_ref()
        .ok_or_else(|| CliError::Validation("the problem has no [hamiltonian] density".into()))?;
    Ok(HamiltonianSpec::new(&spec.y.legendre(), d.value.clone())?)
}

fn rho(spec: &ProblemSpec) -> Scalar {
    spec.rho
        .as_ref()
        .map_or_else(Scalar::one, |d| d.value.clone())
}

/// Parse a command-line function on the homogeneous chart, with `rho`
/// bound to the problem's density coefficient.
fn function(spec: &ProblemSpec, option: &str, text: &str) -> Result<Scalar, CliError> {
    let z = spec.y.homogeneous();
    let scope = Scope::new(&z).with_macro("rho", rho(spec));
    parse_in_scope(text, &scope).map_err(|e| CliError::Parse(format!("{option}: {e}")))
}

fn one_dimensional(spec: &ProblemSpec, what: &str) -> Result<(), CliError> {
    if spec.y.base_dim() == 1 {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{what} requires a one-dimensional base"
        )))
    }
}

fn dx(spec: &ProblemSpec, value: Scalar) -> HorizontalOneForm {
    HorizontalOneForm::new(vec![spec.y.base(0)], vec![value])
}

fn nonvanishing_warning(r: &mut RunResult, rho: &Scalar) {
    if !rho.is_constant() {
        r.warn(format!("rho = {rho} is assumed to vanish nowhere"));
    }
}

pub fn hamilton_eqs(spec: &ProblemSpec) -> Result<RunResult, CliError> {
    let h = hamiltonian(spec)?;
    let eqs = hamilton_equations(&h);
    let mut r = RunResult::new("hamilton-eqs");
    for eq in &eqs {
        r.expression(eq.lhs.to_string(), &eq.rhs);
    }
    let (dynamic, free) = is_dynamic_equation(&h.chart().jet()?, &eqs)?;
    let detail = (!dynamic).then(|| format!("free jet dimension {free}"));
    r.verdict(
        "dynamic",
        VerdictEntry::new(if dynamic { "yes" } else { "no" }, detail),
    );
    Ok(r)
}

pub fn evolve(spec: &ProblemSpec, text: &str, via: &[Via]) -> Result<RunResult, CliError> {
    let h = hamiltonian(spec)?;
    let f = function(spec, "--function", text)?;
    let mut via = via.to_vec();
    via.sort();
    via.dedup();
    let mut r = RunResult::new("evolve");
    if spec.y.base_dim() != 1 {
        if via.iter().any(|v| *v != Via::Connection) {
            one_dimensional(spec, "a bracket representation")?;
        }
        let report = evolution_operator_poly(&h, &f)?;
        r.expression("d_H f", &report.components);
        let detail = (!report.is_function_operator()).then(|| {
            let names: Vec<&str> = report.residual_jets.iter().map(|c| c.name()).collect();
            format!("residual jets {}", names.join(", "))
        });
        let label = if report.is_function_operator() {
            "yes"
        } else {
            "no"
        };
        r.verdict("function-operator", VerdictEntry::new(label, detail));
        return Ok(r);
    }
    if via.is_empty() {
        via = vec![
            Via::Connection,
            Via::VerticalBracket,
            Via::CanonicalBracket,
            Via::RhoBracket,
        ];
    }
    let d = evolution_operator_v(&h, &f)?;
    r.expression("d_gamma f", &d);
    let rho = rho(spec);
    let z = h.homogeneous_chart();
    let pp = z.homog_momentum().expect("homogeneous chart");
    let x = spec.y.base(0);
    let mut t_identities = None;
    for v in via {
        match v {
            Via::Connection => {}
            Via::VerticalBracket => {
                let form = dx(
                    spec,
                    f.diff(&x) + vertical_bracket(h.chart(), h.density(), &f)?,
                );
                r.expression("(d_x f + {H,f}_V) dx", &form);
                r.verdict("vertical-bracket", VerdictEntry::yes_no(form == d));
            }
            Via::CanonicalBracket => {
                let (dt, ids) = evolution_operator_t(&h, &f, &rho)?;
                let pp_h = Scalar::coord(&pp) + h.density();
                let form = dx(spec, canonical_bracket(&z, &pp_h, &f)?);
                r.expression("{pp+H,f} dx", &form);
                let ok = form == d && dt == d && ids.canonical_bracket;
                r.verdict("canonical-bracket", VerdictEntry::yes_no(ok));
                t_identities = Some(ids);
            }
            Via::RhoBracket => {
                let (dt, ids) = evolution_operator_t(&h, &f, &rho)?;
                let e = energy_function(&rho, &h)?;
                let form = dx(spec, &rho * canonical_bracket(&z, &e, &f)?);
                r.expression("E", &e);
                r.expression("rho {E,f} dx", &form);
                let ok = form == d && dt == d && ids.rho_bracket;
                r.verdict("rho-bracket", VerdictEntry::yes_no(ok));
                nonvanishing_warning(&mut r, &rho);
                t_identities = Some(ids);
            }
        }
    }
    if let Some(ids) = t_identities {
        r.verdict(
            format!("independent of gamma({pp},{x})"),
            VerdictEntry::yes_no(ids.gamma_p_independent),
        );
    }
    Ok(r)
}

pub fn bracket(
    spec: &ProblemSpec,
    kind: BracketKind,
    f: &str,
    g: &str,
) -> Result<RunResult, CliError> {
    one_dimensional(spec, "bracket")?;
    let f = function(spec, "--f", f)?;
    let g = function(spec, "--g", g)?;
    let mut r = RunResult::new("bracket");
    match kind {
        BracketKind::Vertical => {
            let value = vertical_bracket(&spec.y.legendre(), &f, &g)?;
            r.expression(format!("{{{f}, {g}}}_V"), value);
        }
        BracketKind::Canonical => {
            let value = canonical_bracket(&spec.y.homogeneous(), &f, &g)?;
            r.expression(format!("{{{f}, {g}}}"), value);
        }
    }
    Ok(r)
}

pub fn check_global(
    spec: &ProblemSpec,
    object: Option<Object>,
    text: Option<&str>,
) -> Result<RunResult, CliError> {
    let t = spec
        .chart2
        .clone()
        .ok_or_else(|| CliError::Validation("check-global needs a [chart2] section".into()))?;
    let atlas = Atlas::new(t)?;
    let mut r = RunResult::new("check-global");
    let unit = covhamkit::globality::check_unit_density(&atlas);
    if object == Some(Object::UnitDensity) {
        r.expression("jacobian", atlas.jacobian());
        r.verdict(
            "unit-density",
            VerdictEntry::new(unit.label(), unit.detail()),
        );
        return Ok(r);
    }
    one_dimensional(spec, "check-global")?;
    let h = hamiltonian(spec)?;
    let f = match text {
        Some(t) => function(spec, "--function", t)?,
        None => Scalar::coord(&spec.y.fiber(0)),
    };
    let rho = rho(spec);
    let report = globality_report(&h, &f, &rho, &atlas)?;
    r.expression("H", h.density());
    r.expression("H'", atlas.push_hamiltonian(&h)?.density());
    r.expression("f", &f);
    r.expression("rho", &rho);
    r.expression("rho'", atlas.push_density(&rho)?);
    let mut add = |name: &str| {
        let v = report.verdict(name).expect("report names");
        r.verdict(name, VerdictEntry::new(v.label(), v.detail()));
    };
    match object {
        Some(Object::Hamiltonian) => add("hamiltonian"),
        Some(Object::EvolutionForm) => add("evolution-form"),
        Some(Object::BracketSplit) => add("bracket-split"),
        Some(Object::EnergyFunction) => add("energy-function"),
        Some(Object::UnitDensity) => unreachable!("handled above"),
        None => {
            for (name, _) in &report.verdicts {
                add(name);
            }
            for (name, ok) in &report.identities {
                r.verdict(name.clone(), VerdictEntry::yes_no(*ok));
            }
            r.verdict(
                "unit-density",
                VerdictEntry::new(unit.label(), unit.detail()),
            );
        }
    }
    nonvanishing_warning(&mut r, &rho);
    Ok(r)
}

pub fn forms(spec: &ProblemSpec) -> Result<RunResult, CliError> {
    let z = spec.y.homogeneous();
    let mut r = RunResult::new("forms");
    r.expression("Xi", liouville_form(&z)?);
    r.expression("Omega", multisymplectic_form(&z)?);
    r.expression("Omega_Pi", polysymplectic_form(&spec.y.legendre())?);
    if spec.hamiltonian.is_some() {
        let h = hamiltonian(spec)?;
        r.expression("H", hamiltonian_form(&h));
        r.expression("H*", multisymplectic_hamiltonian_density(&h));
    }
    Ok(r)
}

pub fn legendre(spec: &ProblemSpec) -> Result<RunResult, CliError> {
    let d = spec
        .lagrangian
        .as_ref()
        .ok_or_else(|| CliError::Validation("the problem has no [lagrangian] density".into()))?;
    let l = LagrangianSpec::new(&spec.y.jet()?, d.value.clone())?;
    let mut r = RunResult::new("legendre");
    for (p, value) in legendre_map(&l) {
        r.expression(p.to_string(), value);
    }
    Ok(r)
}

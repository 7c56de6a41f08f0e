use crate::geometry::{contract, BundleKind, Chart, DiffForm, MultiVector};
use crate::linear::{self, LinearError, PivotOrder};
use crate::symexpr::{Bindings, CoordId, Scalar};

use super::{multisymplectic_form, ConnectionFamily, CovhamError};

fn subsets(coords: &[CoordId], r: usize) -> Vec<Vec<CoordId>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, c) in coords.iter().enumerate() {
        for mut rest in subsets(&coords[k + 1..], r - 1) {
            rest.insert(0, c.clone());
            out.push(rest);
        }
    }
    out
}

/// Some r-vector `ϑ` with `ϑ ⌟ Ω = target`, free components set to zero.
fn solve_contraction(
    chart: &Chart,
    omega: &DiffForm,
    target: &DiffForm,
    r: usize,
) -> Result<MultiVector, LinearError> {
    let tuples = subsets(chart.coords(), r);
    let unknowns: Vec<CoordId> = (0..tuples.len())
        .map(|k| CoordId::param(format!("u{k}"), k))
        .collect();
    let mut v = MultiVector::zero(r);
    for (t, u) in tuples.iter().zip(&unknowns) {
        v = v.add(&MultiVector::term(Scalar::coord(u), t.clone()));
    }
    let lhs = contract(&v, omega).expect("degree checked by caller");
    let eqs: Vec<Scalar> = lhs.sub(target).terms().map(|(_, c)| c.clone()).collect();
    let (a, b) = linear::extract(&eqs, &unknowns)?;
    let sol = linear::solve(&a, &b, unknowns.len(), PivotOrder::First)?;
    let mut out = MultiVector::zero(r);
    for (t, value) in tuples.into_iter().zip(sol.particular()) {
        out = out.add(&MultiVector::term(value, t));
    }
    Ok(out)
}

/// The vector field `ϑ_f` on `T*Y` with `ϑ_f ⌟ Ω = −df`.
pub fn hamiltonian_vector_field(chart: &Chart, f: &Scalar) -> Result<MultiVector, CovhamError> {
    if chart.kind() != BundleKind::TstarY {
        return Err(CovhamError::WrongChart {
            expected: "TstarY",
            found: chart.kind(),
        });
    }
    if let Some(c) = f.coords().into_iter().find(|c| !chart.contains(c)) {
        return Err(CovhamError::ForbiddenCoordinate(c.name().to_string()));
    }
    let omega = multisymplectic_form(chart)?;
    let df = DiffForm::function(f.clone()).d();
    Ok(solve_contraction(
        chart,
        &omega,
        &df.scale(&Scalar::from_int(-1)),
        1,
    )?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultivectorOutcome {
    Solution(MultiVector),
    /// No multivector degree `r ≥ 1` satisfies `deg Ω − r = deg σ + 1`.
    DegreeObstruction {
        omega_degree: usize,
        sigma_degree: usize,
    },
    InconsistentSystem,
}

/// Look for an r-vector `ϑ` with `ϑ ⌟ Ω = dσ`, where
/// `r = deg Ω − deg σ − 1`. For a function `σ = f` this gives `−ϑ_f`.
pub fn solve_hamiltonian_multivector(
    chart: &Chart,
    sigma: &DiffForm,
    omega: &DiffForm,
) -> MultivectorOutcome {
    let r = omega.degree() as isize - sigma.degree() as isize - 1;
    if r <= 0 || r as usize > chart.dim() {
        return MultivectorOutcome::DegreeObstruction {
            omega_degree: omega.degree(),
            sigma_degree: sigma.degree(),
        };
    }
    match solve_contraction(chart, omega, &sigma.d(), r as usize) {
        Ok(v) => MultivectorOutcome::Solution(v),
        Err(_) => MultivectorOutcome::InconsistentSystem,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Horizontality {
    pub horizontal: bool,
    /// Values of the family parameters; unfixed ones map to themselves.
    pub assignment: Bindings,
}

/// Whether `ρ ϑ` is the horizontal lift of `∂_x` for some member of the
/// family.
pub fn horizontality_check(
    theta: &MultiVector,
    family: &ConnectionFamily,
    rho: &Scalar,
) -> Result<Horizontality, CovhamError> {
    if family.chart().base_dim() != 1 {
        return Err(CovhamError::NeedsOneDimensionalBase);
    }
    let lift = family.connection().horizontal_lift(0);
    if theta.degree() != 1 {
        return Ok(Horizontality {
            horizontal: false,
            assignment: Bindings::new(),
        });
    }
    let diff = theta.scale(rho).sub(&lift);
    let eqs: Vec<Scalar> = diff.terms().map(|(_, c)| c.clone()).collect();
    let params = family.params();
    let (a, b) = linear::extract(&eqs, params)?;
    Ok(
        match linear::solve(&a, &b, params.len(), PivotOrder::First) {
            Ok(sol) => Horizontality {
                horizontal: true,
                assignment: sol.assignment(params),
            },
            Err(LinearError::Inconsistent) => Horizontality {
                horizontal: false,
                assignment: Bindings::new(),
            },
            Err(e) => return Err(e.into()),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covham::{
        energy_function, multisymplectic_hamiltonian_density, solve_hamiltonian_connection,
        HamiltonianSpec,
    };
    use crate::symexpr::parse_scalar;

    fn oscillator() -> HamiltonianSpec {
        let pi = Chart::fibred(&["x"], &["y"]).unwrap().legendre();
        HamiltonianSpec::new(&pi, parse_scalar("(p_y^2 + y^2)/2", &pi).unwrap()).unwrap()
    }

    #[test]
    fn hamiltonian_vector_fields() {
        let h = oscillator();
        let z = h.homogeneous_chart();
        let s = |t: &str| parse_scalar(t, &z).unwrap();
        let e = energy_function(&s("1"), &h).unwrap();
        assert_eq!(
            hamiltonian_vector_field(&z, &e).unwrap().to_string(),
            "D(x) + p_y D(y) - y D(p_y)"
        );
        assert_eq!(
            hamiltonian_vector_field(&z, &s("y")).unwrap().to_string(),
            "-D(p_y)"
        );
        assert!(hamiltonian_vector_field(&z, &s("1")).unwrap().is_zero());
    }

    #[test]
    fn multivector_degrees() {
        let h = oscillator();
        let z = h.homogeneous_chart();
        let omega = multisymplectic_form(&z).unwrap();
        let hstar = multisymplectic_hamiltonian_density(&h);
        assert!(matches!(
            solve_hamiltonian_multivector(&z, &hstar, &omega),
            MultivectorOutcome::DegreeObstruction {
                omega_degree: 2,
                sigma_degree: 1
            }
        ));
        let y = parse_scalar("y", &z).unwrap();
        let MultivectorOutcome::Solution(v) =
            solve_hamiltonian_multivector(&z, &DiffForm::function(y.clone()), &omega)
        else {
            panic!("expected a solution");
        };
        assert_eq!(
            v,
            hamiltonian_vector_field(&z, &y)
                .unwrap()
                .scale(&Scalar::from_int(-1))
        );

        let z2 = Chart::fibred(&["x0", "x1"], &["y"]).unwrap().homogeneous();
        let omega2 = multisymplectic_form(&z2).unwrap();
        let ydy = DiffForm::term(parse_scalar("y", &z2).unwrap(), vec![z2.fiber(0)]);
        assert_eq!(
            solve_hamiltonian_multivector(&z2, &ydy, &omega2),
            MultivectorOutcome::Solution(MultiVector::zero(1))
        );
    }

    #[test]
    fn horizontality() {
        let h = oscillator();
        let z = h.homogeneous_chart();
        let fam =
            solve_hamiltonian_connection(&multisymplectic_hamiltonian_density(&h), &z).unwrap();
        let gp = fam.params()[0].clone();
        for (rho, expected) in [("1", "0"), ("x", "(1/2*y^2 + 1/2*p_y^2 + pp)/x")] {
            let rho = parse_scalar(rho, &z).unwrap();
            let e = energy_function(&rho, &h).unwrap();
            let theta = hamiltonian_vector_field(&z, &e).unwrap();
            let res = horizontality_check(&theta, &fam, &rho).unwrap();
            assert!(res.horizontal);
            assert_eq!(res.assignment[&gp].to_string(), expected);
            assert_eq!(res.assignment[&gp], -(&rho * e.diff(&z.base(0))));
        }
        let dy = MultiVector::partial(&z.fiber(0));
        assert!(
            !horizontality_check(&dy, &fam, &Scalar::one())
                .unwrap()
                .horizontal
        );
    }
}

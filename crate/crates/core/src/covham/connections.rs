use std::collections::BTreeMap;
use std::fmt;

use crate::geometry::{contract, BundleKind, Chart, Connection, DiffForm, MultiVector};
use crate::linear::{self, PivotOrder};
use crate::symexpr::{Bindings, CoordId, Scalar};

use super::{CovhamError, HamiltonianSpec};

/// `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl Equation {
    pub fn residual(&self) -> Scalar {
        &self.lhs - &self.rhs
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Connection coefficients that may contain free parameters.
///
/// `constraints` records the linear conditions the coefficients were solved
/// from, written in the original unknown symbols; the stored coefficients
/// already satisfy them for every parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionFamily {
    chart: Chart,
    coefficients: BTreeMap<(CoordId, usize), Scalar>,
    params: Vec<CoordId>,
    constraints: Vec<Equation>,
}

fn param_name(a: &CoordId, chart: &Chart, mu: usize) -> String {
    format!("gamma({},{})", a, chart.base(mu))
}

impl ConnectionFamily {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coefficients(&self) -> &BTreeMap<(CoordId, usize), Scalar> {
        &self.coefficients
    }

    pub fn coefficient(&self, a: &CoordId, mu: usize) -> Scalar {
        self.coefficients
            .get(&(a.clone(), mu))
            .cloned()
            .unwrap_or_default()
    }

    pub fn params(&self) -> &[CoordId] {
        &self.params
    }

    pub fn free_dimension(&self) -> usize {
        self.params.len()
    }

    pub fn constraints(&self) -> &[Equation] {
        &self.constraints
    }

    /// The family as one connection with symbolic parameters.
    pub fn connection(&self) -> Connection {
        Connection::new(&self.chart, self.coefficients.clone())
            .expect("family coefficients live on the chart")
    }

    /// Fix (some of) the parameters.
    pub fn instantiate(&self, values: &Bindings) -> Result<ConnectionFamily, CovhamError> {
        let mut coefficients = BTreeMap::new();
        for (k, g) in &self.coefficients {
            let v = g.substitute(values)?;
            if !v.is_zero() {
                coefficients.insert(k.clone(), v);
            }
        }
        Ok(self.rebuilt(self.chart.clone(), coefficients))
    }

    /// Restriction to the coordinates of `target`, e.g. along `ζ: Z → Π`.
    pub fn project(&self, target: &Chart) -> ConnectionFamily {
        let coefficients = self
            .coefficients
            .iter()
            .filter(|((a, _), _)| target.contains(a))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        self.rebuilt(target.clone(), coefficients)
    }

    fn rebuilt(
        &self,
        chart: Chart,
        coefficients: BTreeMap<(CoordId, usize), Scalar>,
    ) -> ConnectionFamily {
        let params = self
            .params
            .iter()
            .filter(|p| coefficients.values().any(|g| g.depends_on(p)))
            .cloned()
            .collect();
        ConnectionFamily {
            chart,
            coefficients,
            params,
            constraints: self.constraints.clone(),
        }
    }
}

impl fmt::Display for ConnectionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conn = self.connection();
        for mu in 0..self.chart.base_dim() {
            if mu > 0 {
                f.write_str(" + ")?;
            }
            write!(
                f,
                "d{} ⊗ ({})",
                self.chart.base(mu),
                conn.horizontal_lift(mu)
            )?;
        }
        Ok(())
    }
}

/// Solve linear equations in `unknowns`; free unknowns stay as parameters.
fn solve_family(
    chart: &Chart,
    fixed: BTreeMap<(CoordId, usize), Scalar>,
    slots: &[(CoordId, usize)],
    unknowns: &[CoordId],
    eqs: &[Scalar],
    order: PivotOrder,
    constraints: Vec<Equation>,
) -> Result<ConnectionFamily, CovhamError> {
    let (a, b) = linear::extract(eqs, unknowns)?;
    let sol = linear::solve(&a, &b, unknowns.len(), order)?;
    let assignment = sol.assignment(unknowns);
    let mut coefficients = fixed;
    for (slot, u) in slots.iter().zip(unknowns) {
        let v = assignment[u].clone();
        if !v.is_zero() {
            coefficients.insert(slot.clone(), v);
        }
    }
    let params = sol.free.iter().map(|&k| unknowns[k].clone()).collect();
    Ok(ConnectionFamily {
        chart: chart.clone(),
        coefficients,
        params,
        constraints,
    })
}

/// Hamiltonian connections for the polysymplectic form: `γ^i_λ = ∂^λ_i 𝓗`
/// and `γ^λ_{iλ} = −∂_i 𝓗`. For n = 1 the connection is unique; otherwise
/// every trace is solved for its last summand and the rest stay free.
pub fn hamiltonian_connection_polysymplectic(h: &HamiltonianSpec) -> ConnectionFamily {
    let pi = h.chart();
    let n = pi.base_dim();
    let dh = h.density();
    let mut fixed = BTreeMap::new();
    let mut slots = Vec::new();
    let mut unknowns = Vec::new();
    let mut eqs = Vec::new();
    let mut constraints = Vec::new();
    for i in 0..pi.fiber_dim() {
        let y = pi.fiber(i);
        let mut trace = Scalar::zero();
        for mu in 0..n {
            let p = pi.momentum(i, mu).expect("legendre chart");
            let g = dh.diff(&p);
            if !g.is_zero() {
                fixed.insert((y.clone(), mu), g);
            }
            for lam in 0..n {
                let u = CoordId::param(param_name(&p, pi, lam), unknowns.len());
                if mu == lam {
                    trace = trace + Scalar::coord(&u);
                }
                slots.push((p.clone(), lam));
                unknowns.push(u);
            }
        }
        let rhs = -dh.diff(&y);
        eqs.push(&trace - &rhs);
        constraints.push(Equation { lhs: trace, rhs });
    }
    solve_family(
        pi,
        fixed,
        &slots,
        &unknowns,
        &eqs,
        PivotOrder::Last,
        constraints,
    )
    .expect("trace constraints are independent and linear")
}

/// Hamilton equations on `J¹Π`: `y^i_λ = ∂^λ_i 𝓗` and `p^λ_{iλ} = −∂_i 𝓗`.
pub fn hamilton_equations(h: &HamiltonianSpec) -> Vec<Equation> {
    let pi = h.chart();
    let jet = pi.jet().expect("legendre charts have jets");
    let n = pi.base_dim();
    let dh = h.density();
    let mut out = Vec::new();
    for i in 0..pi.fiber_dim() {
        let y = pi.fiber(i);
        for lam in 0..n {
            let p = pi.momentum(i, lam).expect("legendre chart");
            out.push(Equation {
                lhs: Scalar::coord(&jet.jet_of(&y, lam).expect("jet chart")),
                rhs: dh.diff(&p),
            });
        }
    }
    for i in 0..pi.fiber_dim() {
        let y = pi.fiber(i);
        let lhs = (0..n)
            .map(|lam| {
                let p = pi.momentum(i, lam).expect("legendre chart");
                Scalar::coord(&jet.jet_of(&p, lam).expect("jet chart"))
            })
            .sum();
        out.push(Equation {
            lhs,
            rhs: -dh.diff(&y),
        });
    }
    out
}

/// Whether equations on a jet chart determine every jet coordinate, and the
/// dimension of the undetermined part.
pub fn is_dynamic_equation(chart: &Chart, eqs: &[Equation]) -> Result<(bool, usize), CovhamError> {
    if !chart.kind().is_jet() {
        return Err(CovhamError::WrongChart {
            expected: "jet",
            found: chart.kind(),
        });
    }
    let jets = chart.jet_coords();
    let residuals: Vec<Scalar> = eqs.iter().map(Equation::residual).collect();
    let (a, _) = linear::extract(&residuals, &jets)?;
    let free = jets.len() - linear::rank(&a, jets.len());
    Ok((free == 0, free))
}

/// Substitution rules for the jets fixed by the Hamilton equations; each
/// trace is solved for its last summand.
pub(crate) fn hamilton_shell(h: &HamiltonianSpec) -> Bindings {
    let jet = h.chart().jet().expect("legendre charts have jets");
    let jets = jet.jet_coords();
    let residuals: Vec<Scalar> = hamilton_equations(h)
        .iter()
        .map(Equation::residual)
        .collect();
    let (a, b) = linear::extract(&residuals, &jets).expect("Hamilton equations are linear in jets");
    let sol = linear::solve(&a, &b, jets.len(), PivotOrder::Last)
        .expect("Hamilton equations are consistent");
    let mut shell = sol.assignment(&jets);
    shell.retain(|k, v| *v != Scalar::coord(k));
    shell
}

/// Solve `dx ∧ [(∂_x + γ^a ∂_a) ⌟ Ω] = dH*` on `T*Y` for the connection
/// coefficients; undetermined ones become parameters.
pub fn solve_hamiltonian_connection(
    hstar: &DiffForm,
    z: &Chart,
) -> Result<ConnectionFamily, CovhamError> {
    if z.base_dim() != 1 {
        return Err(CovhamError::NeedsOneDimensionalBase);
    }
    if z.kind() != BundleKind::TstarY {
        return Err(CovhamError::WrongChart {
            expected: "TstarY",
            found: z.kind(),
        });
    }
    let omega = super::multisymplectic_form(z)?;
    let x = z.base(0);
    let mut slots = Vec::new();
    let mut unknowns = Vec::new();
    let mut v = MultiVector::partial(&x);
    for a in z.vertical_coords() {
        let u = CoordId::param(param_name(&a, z, 0), unknowns.len());
        v = v.add(&MultiVector::term(Scalar::coord(&u), vec![a.clone()]));
        slots.push((a, 0));
        unknowns.push(u);
    }
    let lhs = DiffForm::differential_of(&x).wedge(&contract(&v, &omega)?);
    let diff = lhs.sub(&hstar.d());
    let eqs: Vec<Scalar> = diff.terms().map(|(_, c)| c.clone()).collect();
    solve_family(
        z,
        BTreeMap::new(),
        &slots,
        &unknowns,
        &eqs,
        PivotOrder::First,
        Vec::new(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covham::multisymplectic_hamiltonian_density;
    use crate::symexpr::parse_scalar;

    fn spec(base: &[&str], h: &str) -> HamiltonianSpec {
        let pi = Chart::fibred(base, &["y"]).unwrap().legendre();
        HamiltonianSpec::new(&pi, parse_scalar(h, &pi).unwrap()).unwrap()
    }

    #[test]
    fn oscillator_connection_and_equations() {
        let h = spec(&["x"], "(p_y^2 + y^2)/2");
        let fam = hamiltonian_connection_polysymplectic(&h);
        assert_eq!(fam.free_dimension(), 0);
        assert_eq!(fam.to_string(), "dx ⊗ (D(x) + p_y D(y) - y D(p_y))");
        let eqs: Vec<String> = hamilton_equations(&h)
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(eqs, ["jet(y,x) = p_y", "jet(p_y,x) = -y"]);
        let j = h.chart().jet().unwrap();
        assert_eq!(
            is_dynamic_equation(&j, &hamilton_equations(&h)).unwrap(),
            (true, 0)
        );
    }

    #[test]
    fn scalar_field_family() {
        let h = spec(&["x0", "x1"], "(mom(y,x0)^2 + mom(y,x1)^2)/2 + y^4");
        let fam = hamiltonian_connection_polysymplectic(&h);
        assert_eq!(fam.free_dimension(), 3);
        let pi = h.chart();
        let p1 = pi.momentum(0, 1).unwrap();
        assert_eq!(fam.coefficient(&pi.fiber(0), 1), Scalar::coord(&p1));
        assert_eq!(
            fam.coefficient(&p1, 1).to_string(),
            "-4*y^3 - gamma(mom(y,x0),x0)"
        );
        let eqs: Vec<String> = hamilton_equations(&h)
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(
            eqs,
            [
                "jet(y,x0) = mom(y,x0)",
                "jet(y,x1) = mom(y,x1)",
                "jet(mom(y,x0),x0) + jet(mom(y,x1),x1) = -4*y^3"
            ]
        );
        let j = pi.jet().unwrap();
        assert_eq!(
            is_dynamic_equation(&j, &hamilton_equations(&h)).unwrap(),
            (false, 3)
        );
    }

    #[test]
    fn homogeneous_solver_leaves_pp_free() {
        let h = spec(&["x"], "(p_y^2 + y^2)/2");
        let z = h.homogeneous_chart();
        let fam =
            solve_hamiltonian_connection(&multisymplectic_hamiltonian_density(&h), &z).unwrap();
        assert_eq!(fam.params().len(), 1);
        assert_eq!(fam.params()[0].name(), "gamma(pp,x)");
        assert_eq!(
            fam.to_string(),
            "dx ⊗ (D(x) + p_y D(y) + gamma(pp,x) D(pp) - y D(p_y))"
        );
        assert_eq!(
            fam.project(h.chart()).connection(),
            hamiltonian_connection_polysymplectic(&h).connection()
        );
        let zero = spec(&["x"], "0");
        let fam =
            solve_hamiltonian_connection(&multisymplectic_hamiltonian_density(&zero), &z).unwrap();
        assert_eq!(fam.coefficients().len(), 1);
    }
}

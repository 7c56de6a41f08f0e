use covhamkit::covham::{hamilton_equations, is_dynamic_equation, HamiltonianSpec};
use covhamkit::geometry::Chart;
use covhamkit::symexpr::{parse_scalar, Scalar};

/// Rank by fraction-free (Bareiss) elimination over the integers.
fn bareiss_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    rank
}

fn chart(n: usize, m: usize) -> Chart {
    let b: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let f: Vec<String> = (0..m).map(|i| format!("y{i}")).collect();
    let b: Vec<&str> = b.iter().map(String::as_str).collect();
    let f: Vec<&str> = f.iter().map(String::as_str).collect();
    Chart::fibred(&b, &f).unwrap()
}

/// A Hamiltonian touching every coordinate, so no equation is trivially
/// empty on the right.
fn hamiltonian(pi: &Chart) -> HamiltonianSpec {
    let terms: Vec<String> = pi
        .coords()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("{}*{c}^2", k + 1))
        .collect();
    let text = format!("{} + x0*y0*{}", terms.join(" + "), pi.momenta()[0]);
    HamiltonianSpec::new(pi, parse_scalar(&text, pi).unwrap()).unwrap()
}

fn integer(s: &Scalar) -> i128 {
    (-4i64..=4)
        .find(|k| *s == Scalar::from_int(*k))
        .map(i128::from)
        .unwrap_or_else(|| panic!("non-integer jet coefficient {s}"))
}

/// Jet-coefficient matrix written down from the index structure of the
/// equations `y^i_λ = …` and `Σ_λ p^λ_{iλ} = …`.
fn combinatorial_matrix(jet: &Chart) -> Vec<Vec<i128>> {
    let (n, m) = (jet.base_dim(), jet.fiber_dim());
    let jets = jet.jet_coords();
    let col = |a: &covhamkit::symexpr::CoordId, mu: usize| {
        let j = jet.jet_of(a, mu).unwrap();
        jets.iter().position(|c| *c == j).unwrap()
    };
    let mut rows = Vec::new();
    for i in 0..m {
        for lam in 0..n {
            let mut row = vec![0; jets.len()];
            row[col(&jet.fiber(i), lam)] = 1;
            rows.push(row);
        }
    }
    for i in 0..m {
        let mut row = vec![0; jets.len()];
        for lam in 0..n {
            row[col(&jet.momentum(i, lam).unwrap(), lam)] = 1;
        }
        rows.push(row);
    }
    rows
}

#[test]
fn free_jet_dimension_agrees_with_rank_oracle() {
    for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)] {
        let pi = chart(n, m).legendre();
        let jet = pi.jet().unwrap();
        let eqs = hamilton_equations(&hamiltonian(&pi));
        let derived: Vec<Vec<i128>> = eqs
            .iter()
            .map(|e| {
                let r = e.residual();
                jet.jet_coords()
                    .iter()
                    .map(|j| integer(&r.diff(j)))
                    .collect()
            })
            .collect();
        assert_eq!(derived, combinatorial_matrix(&jet), "n={n} m={m}");
        let free = jet.jet_coords().len() - bareiss_rank(derived);
        assert_eq!(free, m * (n * n - 1), "n={n} m={m}");
        assert_eq!(is_dynamic_equation(&jet, &eqs).unwrap(), (free == 0, free));
    }
}

#[test]
fn bareiss_oracle_sanity() {
    assert_eq!(bareiss_rank(vec![vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(
        bareiss_rank(vec![vec![0, 2, 1], vec![3, 1, 0], vec![3, 3, 1]]),
        2
    );
    assert_eq!(bareiss_rank(vec![vec![2, 0], vec![0, 3]]), 2);
}

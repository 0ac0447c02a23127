//! Nelder–Mead simplex minimizer used for the conditional-least-squares fit.

pub struct SimplexOutcome {
    pub point: Vec<f64>,
    pub objective: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` starting at `origin`, perturbing dimension i by `steps[i]`
/// for the initial simplex. Stops when the simplex objective spread drops
/// below `spread_tol` or after `max_evals` objective calls.
pub fn nelder_mead<F>(
    mut f: F,
    origin: &[f64],
    steps: &[f64],
    spread_tol: f64,
    max_evals: usize,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let dim = origin.len();
    assert!(dim > 0 && steps.len() == dim);

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(origin.to_vec());
    for i in 0..dim {
        let mut p = origin.to_vec();
        p[i] += steps[i];
        simplex.push(p);
    }
    let mut scores: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evals)).collect();

    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if scores[worst] - scores[best] < spread_tol {
            return SimplexOutcome {
                point: simplex[best].clone(),
                objective: scores[best],
                evaluations: evals,
                converged: true,
            };
        }
        if evals >= max_evals {
            return SimplexOutcome {
                point: simplex[best].clone(),
                objective: scores[best],
                evaluations: evals,
                converged: false,
            };
        }

        let mut centroid = vec![0.0; dim];
        for &i in &order[..dim] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let reflected_score = eval(&reflected, &mut evals);

        if reflected_score < scores[best] {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + GAMMA * (r - c))
                .collect();
            let expanded_score = eval(&expanded, &mut evals);
            if expanded_score < reflected_score {
                simplex[worst] = expanded;
                scores[worst] = expanded_score;
            } else {
                simplex[worst] = reflected;
                scores[worst] = reflected_score;
            }
            continue;
        }
        if reflected_score < scores[second_worst] {
            simplex[worst] = reflected;
            scores[worst] = reflected_score;
            continue;
        }

        let contracted: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(c, w)| c + RHO * (w - c))
            .collect();
        let contracted_score = eval(&contracted, &mut evals);
        if contracted_score < scores[worst] {
            simplex[worst] = contracted;
            scores[worst] = contracted_score;
            continue;
        }

        // Shrink toward the best vertex.
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            let shrunk: Vec<f64> = anchor
                .iter()
                .zip(&simplex[i])
                .map(|(b, v)| b + SIGMA * (v - b))
                .collect();
            scores[i] = eval(&shrunk, &mut evals);
            simplex[i] = shrunk;
        }
    }
}

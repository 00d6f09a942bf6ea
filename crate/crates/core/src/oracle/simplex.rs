//! Nelder–Mead downhill simplex with dimension-adaptive coefficients
//! (Gao & Han 2012).

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop when the spread of simplex values drops below this.
    pub f_tol: f64,
    /// ...and every vertex is within this of the best one (max-norm).
    pub x_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { max_evals: 20_000, f_tol: 1e-15, x_tol: 1e-12 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

impl NelderMead {
    /// Minimizes `f` from an axis-aligned simplex of edge `step` at `x0`.
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64], step: f64) -> Minimum {
        let n = x0.len();
        if n == 0 {
            return Minimum { x: Vec::new(), fx: f(x0), evals: 1 };
        }
        let nf = n as f64;
        let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
        let mut evals = n + 1;

        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];
        loop {
            // Sort ascending by value; stable so ties keep insertion order.
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let spread = values[n] - values[0];
            let size = simplex[1..]
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0f64, f64::max);
            if (spread <= self.f_tol * values[0].abs().max(1.0) && size <= self.x_tol) || evals >= self.max_evals {
                break;
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let worst = simplex[n].clone();
            let along = |coef: f64, out: &mut Vec<f64>| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(&worst) {
                    *o = c + coef * (c - w);
                }
            };

            along(alpha, &mut trial);
            let fr = f(&trial);
            evals += 1;
            if fr < values[0] {
                along(alpha * gamma, &mut trial2);
                let fe = f(&trial2);
                evals += 1;
                if fe < fr {
                    simplex[n].copy_from_slice(&trial2);
                    values[n] = fe;
                } else {
                    simplex[n].copy_from_slice(&trial);
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
                continue;
            }
            // Contraction, outside or inside.
            let (coef, bound) = if fr < values[n] { (alpha * rho, fr) } else { (-rho, values[n]) };
            along(coef, &mut trial2);
            let fc = f(&trial2);
            evals += 1;
            if fc < bound {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fc;
                continue;
            }
            // Shrink toward the best vertex.
            let best = simplex[0].clone();
            for k in 1..=n {
                for (x, b) in simplex[k].iter_mut().zip(&best) {
                    *x = b + sigma * (*x - b);
                }
                values[k] = f(&simplex[k]);
            }
            evals += n;
        }
        Minimum { x: simplex[0].clone(), fx: values[0], evals }
    }
}

//! Derivative-free minimization with the Nelder-Mead simplex method.
//!
//! The likelihood surface of the zone model has kinks where a pitch lies on
//! either axis through the zone center (`|x - x0|^r` is not differentiable
//! there), so the fitter relies on a simplex search rather than gradients.

/// Reflection, expansion, contraction and shrink coefficients.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct NelderMead {
    /// Initial simplex edge along each coordinate.
    pub steps: Vec<f64>,
    /// Iteration budget shared by all restarts.
    pub max_iters: usize,
    /// Convergence threshold on the spread of function values across the
    /// simplex, relative to `1 + |f_best|`.
    pub tol: f64,
    /// Number of times the simplex is rebuilt around a converged optimum to
    /// guard against premature collapse.
    pub max_restarts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iters: usize,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn new(steps: Vec<f64>, max_iters: usize, tol: f64) -> Self {
        NelderMead {
            steps,
            max_iters,
            tol,
            max_restarts: 2,
        }
    }

    fn spread_ok(&self, best: f64, worst: f64) -> bool {
        worst - best <= self.tol * (1.0 + best.abs())
    }

    /// Minimizes `f` from `x0`. Non-finite objective values are treated as
    /// `+inf`, which keeps the simplex away from invalid regions.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        assert_eq!(
            x0.len(),
            self.steps.len(),
            "start and step dimensions differ"
        );
        let mut evals = 0usize;
        let mut eval = |x: &[f64]| {
            evals += 1;
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        };

        let mut best_x = x0.to_vec();
        let mut best_f = eval(&best_x);
        let mut iters = 0usize;
        let mut converged = false;

        for restart in 0..=self.max_restarts {
            let (x, fx, used, ok) = self.run(&mut eval, &best_x, best_f, self.max_iters - iters);
            iters += used;
            let improvement = best_f - fx;
            let improved_little = restart > 0 && improvement <= self.tol * (1.0 + fx.abs());
            if fx <= best_f {
                best_x = x;
                best_f = fx;
            }
            converged = ok;
            if !ok || improved_little || iters >= self.max_iters {
                break;
            }
        }

        Minimum {
            x: best_x,
            f: best_f,
            iters,
            evals,
            converged,
        }
    }

    fn run<E>(
        &self,
        eval: &mut E,
        start: &[f64],
        f_start: f64,
        budget: usize,
    ) -> (Vec<f64>, f64, usize, bool)
    where
        E: FnMut(&[f64]) -> f64,
    {
        let n = start.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.to_vec(), f_start));
        for i in 0..n {
            let mut v = start.to_vec();
            v[i] += self.steps[i];
            let fv = eval(&v);
            simplex.push((v, fv));
        }

        let order = |s: &mut Vec<(Vec<f64>, f64)>| {
            s.sort_by(|a, b| a.1.total_cmp(&b.1));
        };
        order(&mut simplex);

        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut iters = 0;
        while iters < budget {
            if self.spread_ok(simplex[0].1, simplex[n].1) {
                return (simplex[0].0.clone(), simplex[0].1, iters, true);
            }
            iters += 1;

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for (v, _) in &simplex[..n] {
                for (c, vi) in centroid.iter_mut().zip(v) {
                    *c += vi / n as f64;
                }
            }
            let point = |coef: f64, worst: &[f64], out: &mut Vec<f64>| {
                for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                    *o = c + coef * (c - w);
                }
            };

            let f_best = simplex[0].1;
            let f_second_worst = simplex[n - 1].1;
            let f_worst = simplex[n].1;

            point(REFLECT, &simplex[n].0, &mut trial);
            let f_r = eval(&trial);

            if f_r < f_best {
                let reflected = trial.clone();
                point(REFLECT * EXPAND, &simplex[n].0, &mut trial);
                let f_e = eval(&trial);
                simplex[n] = if f_e < f_r {
                    (trial.clone(), f_e)
                } else {
                    (reflected, f_r)
                };
            } else if f_r < f_second_worst {
                simplex[n] = (trial.clone(), f_r);
            } else {
                // outside contraction if the reflection beat the worst vertex,
                // inside contraction otherwise
                let (coef, reference) = if f_r < f_worst {
                    (REFLECT * CONTRACT, f_r)
                } else {
                    (-CONTRACT, f_worst)
                };
                point(coef, &simplex[n].0, &mut trial);
                let f_c = eval(&trial);
                if f_c < reference {
                    simplex[n] = (trial.clone(), f_c);
                } else {
                    let best = simplex[0].0.clone();
                    for (v, fv) in simplex.iter_mut().skip(1) {
                        for (vi, bi) in v.iter_mut().zip(&best) {
                            *vi = bi + SHRINK * (*vi - bi);
                        }
                        *fv = eval(v);
                    }
                }
            }
            order(&mut simplex);
        }
        let ok = self.spread_ok(simplex[0].1, simplex[n].1);
        (simplex[0].0.clone(), simplex[0].1, iters, ok)
    }
}

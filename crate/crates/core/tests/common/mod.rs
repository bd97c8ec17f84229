//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use circle_lift::rational::to_f64;
use circle_lift::PLLift;

/// Floating-point evaluation of a lifting from its anchors alone.
pub struct FloatLift {
    xs: Vec<f64>,
    ys: Vec<f64>,
    degree: f64,
}

impl FloatLift {
    pub fn new(f: &PLLift) -> Self {
        FloatLift {
            xs: f.anchors().iter().map(|(x, _)| to_f64(x)).collect(),
            ys: f.anchors().iter().map(|(_, y)| to_f64(y)).collect(),
            degree: f.degree() as f64,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = self.xs[0];
        let k = (x - t).floor();
        let r = x - k;
        let i = match self.xs.iter().position(|&a| a > r) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => self.xs.len() - 2,
        };
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
        y0 + (y1 - y0) * (r - x0) / (x1 - x0) + self.degree * k
    }

    pub fn iterate(&self, mut x: f64, n: usize) -> f64 {
        for _ in 0..n {
            x = self.eval(x);
        }
        x
    }
}

/// Roots of `g` on `[lo, hi)` from sign changes on a uniform grid, refined by bisection.
pub fn bisection_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let step = (hi - lo) / samples as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut ga = g(a);
    for i in 1..=samples {
        let b = lo + step * i as f64;
        let gb = g(b);
        if ga == 0.0 {
            roots.push(a);
        } else if ga * gb < 0.0 {
            let (mut l, mut r, mut gl) = (a, b, ga);
            for _ in 0..80 {
                let m = 0.5 * (l + r);
                let gm = g(m);
                if gm == 0.0 {
                    l = m;
                    r = m;
                    break;
                }
                if gl * gm < 0.0 {
                    r = m;
                } else {
                    l = m;
                    gl = gm;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        ga = gb;
    }
    roots
}

/// Rooted closed walks of length `n` by explicit enumeration: (all, non-repetitions).
pub fn closed_walks_dfs(adj: &[Vec<u8>], n: usize) -> (u64, u64) {
    fn rec(adj: &[Vec<u8>], n: usize, path: &mut Vec<usize>, all: &mut u64, primitive: &mut u64) {
        let last = *path.last().unwrap();
        if path.len() == n {
            if adj[last][path[0]] == 1 {
                *all += 1;
                let repeated = (1..n)
                    .filter(|d| n.is_multiple_of(*d))
                    .any(|d| (0..n).all(|i| path[i] == path[i % d]));
                if !repeated {
                    *primitive += 1;
                }
            }
            return;
        }
        for v in 0..adj.len() {
            if adj[last][v] == 1 {
                path.push(v);
                rec(adj, n, path, all, primitive);
                path.pop();
            }
        }
    }
    let (mut all, mut primitive) = (0, 0);
    for s in 0..adj.len() {
        rec(adj, n, &mut vec![s], &mut all, &mut primitive);
    }
    (all, primitive)
}

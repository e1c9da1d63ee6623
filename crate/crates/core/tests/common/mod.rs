#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rga_core::Matrix;

pub fn mat<R: AsRef<[f64]>>(rows: &[R]) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

pub fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.max_abs_diff(b)
}

pub fn pairs(list: &[(usize, usize)]) -> Vec<rga_core::Pair> {
    let mut v: Vec<_> = list
        .iter()
        .map(|&(i, j)| rga_core::Pair::new(i, j))
        .collect();
    v.sort();
    v
}

/// One-based (output, input) pairs as printed in tables.
pub fn one_based(list: &[(usize, usize)]) -> Vec<rga_core::Pair> {
    let zero: Vec<_> = list.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    pairs(&zero)
}

pub mod printed {
    pub const RGA_A: [[f64; 3]; 3] = [
        [-2.47, -2.41, 5.88],
        [3.29, 0.94, -3.24],
        [0.18, 2.47, -1.65],
    ];

    /// Inside the leading factor 1/2.
    pub const MP_AB_HALVED: [[f64; 6]; 3] = [
        [-4.47, -4.54, 9.41, -0.49, -0.28, 2.35],
        [5.93, 1.77, -5.18, 0.66, 0.11, -1.29],
        [0.32, 4.65, -2.64, 0.04, 0.29, -0.66],
    ];

    pub const MP_SECONDS: [[f64; 4]; 3] = [
        [0.6420, -0.0539, 0.4387, -0.0267],
        [0.2588, 0.0171, -0.1278, 0.8519],
        [-0.0521, 0.9052, 0.1904, -0.0436],
    ];

    pub const UC_SECONDS: [[f64; 4]; 3] = [
        [0.7394, -0.0366, 0.3281, -0.0308],
        [0.0821, -0.0803, -0.0420, 1.0402],
        [-0.0483, 0.9329, 0.1651, -0.0496],
    ];

    pub const MP_MINUTES: [[f64; 4]; 3] = [
        [0.0012, -0.1678, 1.1658, 0.0008],
        [0.0005, -0.1253, -0.0023, 1.1272],
        [-0.0001, 1.2929, -0.1643, -0.1285],
    ];

    pub const UC_SAKAI: [[f64; 5]; 4] = [
        [1.2586, -0.2889, 0.0, 0.0, 0.0303],
        [-0.5381, 1.1749, 0.0, 0.0, 0.3631],
        [0.4014, -0.8042, 0.8272, 0.0, 0.5755],
        [-0.3561, 0.4197, 0.1374, 0.7815, 0.0174],
    ];

    pub const MP_SAKAI: [[f64; 5]; 4] = [
        [1.9147, -0.9138, 0.0, 0.0, -0.0009],
        [-1.1071, 2.3221, 0.0, 0.0, -0.2150],
        [0.8131, -1.6290, 0.6500, 0.0, 1.1659],
        [-0.7995, 0.9423, 0.3086, 0.5094, 0.0391],
    ];

    pub const MP_SAKAI_DECIMATED: [[f64; 5]; 4] = [
        [0.2008, 0.7186, 0.0, 0.0, 0.0806],
        [-0.1051, 0.3021, 0.0, 0.0, 0.8030],
        [0.0411, -0.0824, 0.9823, 0.0, 0.0589],
        [-0.0404, 0.0476, 0.0156, 0.9752, 0.0020],
    ];

    /// Boldface pairings, one-based.
    pub const SAKAI_MP_OPTION_1: [(usize, usize); 4] = [(1, 1), (2, 2), (3, 5), (4, 3)];
    pub const SAKAI_MP_OPTION_2: [(usize, usize); 4] = [(1, 1), (2, 2), (3, 3), (4, 4)];
    pub const SAKAI_MP_DECIMATED: [(usize, usize); 4] = [(1, 2), (2, 5), (3, 3), (4, 4)];
}

/// Every complete matching of the smaller side, with its total cost, sorted
/// by cost then pairs.
pub fn enumerate_assignments(cost: &Matrix) -> Vec<(f64, Vec<(usize, usize)>)> {
    let (m, n) = cost.shape();
    let transposed = m > n;
    let (rows, cols) = if transposed { (n, m) } else { (m, n) };
    let at = |r: usize, c: usize| {
        if transposed {
            cost.get(c, r)
        } else {
            cost.get(r, c)
        }
    };
    let mut out = Vec::new();
    let mut used = vec![false; cols];
    let mut chosen = Vec::with_capacity(rows);
    fn walk(
        r: usize,
        rows: usize,
        cols: usize,
        used: &mut [bool],
        chosen: &mut Vec<usize>,
        at: &dyn Fn(usize, usize) -> f64,
        transposed: bool,
        out: &mut Vec<(f64, Vec<(usize, usize)>)>,
    ) {
        if r == rows {
            let total = chosen.iter().enumerate().map(|(i, &j)| at(i, j)).sum();
            let mut ps: Vec<(usize, usize)> = chosen
                .iter()
                .enumerate()
                .map(|(i, &j)| if transposed { (j, i) } else { (i, j) })
                .collect();
            ps.sort();
            out.push((total, ps));
            return;
        }
        for c in 0..cols {
            if !used[c] {
                used[c] = true;
                chosen.push(c);
                walk(r + 1, rows, cols, used, chosen, at, transposed, out);
                chosen.pop();
                used[c] = false;
            }
        }
    }
    walk(0, rows, cols, &mut used, &mut chosen, &at, transposed, &mut out);
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out
}

/// Gauss-Jordan with partial pivoting; `None` when a pivot vanishes.
pub fn gauss_inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut w: Vec<Vec<f64>> = a.to_rows();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| w[x][col].abs().total_cmp(&w[y][col].abs()))
            .unwrap();
        if w[p][col].abs() <= 1e-13 * scale {
            return None;
        }
        w.swap(col, p);
        inv.swap(col, p);
        let d = w[col][col];
        for k in 0..n {
            w[col][k] /= d;
            inv[col][k] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = w[r][col];
                if f != 0.0 {
                    for k in 0..n {
                        w[r][k] -= f * w[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Some(mat(&inv))
}

/// Pseudoinverse of a full-rank matrix from the normal equations.
pub fn full_rank_pinv(g: &Matrix) -> Option<Matrix> {
    let gt = g.transpose();
    if g.rows() <= g.cols() {
        let inner = gauss_inverse(&g.matmul(&gt).unwrap())?;
        Some(gt.matmul(&inner).unwrap())
    } else {
        let inner = gauss_inverse(&gt.matmul(g).unwrap())?;
        Some(inner.matmul(&gt).unwrap())
    }
}

pub fn rga_from_inverse(g: &Matrix, inv: &Matrix) -> Matrix {
    Matrix::from_fn(g.rows(), g.cols(), |i, j| g.get(i, j) * inv.get(j, i))
}

/// Largest of the four Penrose residuals, relative to the operand norms.
pub fn penrose_residual(g: &Matrix, x: &Matrix) -> f64 {
    let gx = g.matmul(x).unwrap();
    let xg = x.matmul(g).unwrap();
    let r1 = gx.matmul(g).unwrap().max_abs_diff(g) / g.max_abs().max(1.0);
    let r2 = xg.matmul(x).unwrap().max_abs_diff(x) / x.max_abs().max(1.0);
    let r3 = gx.max_abs_diff(&gx.transpose());
    let r4 = xg.max_abs_diff(&xg.transpose());
    r1.max(r2).max(r3).max(r4)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let t: f64 = rng.gen();
    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
}

fn signed_entry(rng: &mut ChaCha8Rng) -> f64 {
    let mag = log_uniform(rng, 0.1, 10.0);
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

#[derive(Clone, Debug)]
pub struct RandomCase {
    pub g: Matrix,
    /// Rank the generator built in; `None` when unconstrained.
    pub planted_rank: Option<usize>,
}

/// Random plant up to 6x7: dense, sparse, or a planted low-rank product.
pub fn random_case(rng: &mut ChaCha8Rng) -> RandomCase {
    let m = rng.gen_range(1..=6);
    let n = rng.gen_range(1..=7);
    match rng.gen_range(0..3) {
        0 => RandomCase {
            g: Matrix::from_fn(m, n, |_, _| signed_entry(rng)),
            planted_rank: None,
        },
        1 => {
            let mut g = Matrix::from_fn(m, n, |_, _| {
                if rng.gen_bool(0.3) {
                    0.0
                } else {
                    signed_entry(rng)
                }
            });
            if g.max_abs() == 0.0 {
                g = Matrix::from_fn(m, n, |i, j| f64::from(u8::from(i == j)));
            }
            RandomCase {
                g,
                planted_rank: None,
            }
        }
        _ => {
            let r = rng.gen_range(1..=m.min(n));
            let left = Matrix::from_fn(m, r, |_, _| rng.gen_range(-2.0..2.0));
            let right = Matrix::from_fn(r, n, |_, _| rng.gen_range(-2.0..2.0));
            RandomCase {
                g: left.matmul(&right).unwrap(),
                planted_rank: Some(r),
            }
        }
    }
}

pub fn random_factors(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| log_uniform(rng, 1e-3, 1e3)).collect()
}

//! Dense complex Hermitian matrices and a cyclic Jacobi eigensolver.

use crate::C64;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Eigenvalues (ascending) and the matching unit eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<C64>,
}

const MAX_SWEEPS: usize = 64;

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    /// Builds from the upper triangle of `data`; the lower triangle is
    /// replaced by the mirror image and the diagonal made real.
    pub fn from_upper(dim: usize, mut data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data has the wrong length");
        for i in 0..dim {
            data[i * dim + i].im = 0.0;
            for j in i + 1..dim {
                data[j * dim + i] = data[i * dim + j].conj();
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Exact check, no tolerance.
    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| self.get(i, j) == self.get(j, i).conj()))
    }

    /// Cyclic Jacobi: each sweep zeroes every off-diagonal pair in turn with a
    /// unitary plane rotation until the off-diagonal mass is at roundoff level.
    pub fn eigen(&self) -> Eigen {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut v = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = C64::new(1.0, 0.0);
        }
        let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= tiny {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r <= 0.01 * tiny / n as f64 {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let theta = (aqq - app) / (2.0 * r);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = (t * t + 1.0).sqrt().recip();
                    let s = t * c;
                    let pc = phase.conj();
                    // A ← A U with U = [[c, s], [-s ē, c ē]] on (p, q).
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * c - akq * pc * s;
                        a[k * n + q] = akp * s + akq * pc * c;
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * pc * s;
                        v[k * n + q] = vkp * s + vkq * pc * c;
                    }
                    // A ← U† A.
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = apk * c - aqk * phase * s;
                        a[q * n + k] = apk * s + aqk * phase * c;
                    }
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    a[p * n + p].im = 0.0;
                    a[q * n + q].im = 0.0;
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
        let values = order.iter().map(|&i| a[i * n + i].re).collect();
        let mut vectors = vec![C64::new(0.0, 0.0); n * n];
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                vectors[row * n + col] = v[row * n + src];
            }
        }
        Eigen { values, vectors }
    }
}

//! Small fixed-size tensors used by the constitutive laws and the element kernels.
//!
//! `Tensor2` holds displacement gradients, strains and stresses. `Tensor4` holds
//! tangents with the convention `t[i][j][k][l] = d sigma_ij / d (grad u)_kl`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tensor2(pub [[f64; 2]; 2]);

impl Tensor2 {
    pub const ZERO: Tensor2 = Tensor2([[0.0; 2]; 2]);
    pub const IDENTITY: Tensor2 = Tensor2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a00: f64, a01: f64, a10: f64, a11: f64) -> Self {
        Tensor2([[a00, a01], [a10, a11]])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Tensor2([[a, 0.0], [0.0, b]])
    }

    /// Row-major flattening, entry `(i, j)` at `2 * i + j`.
    pub fn from_flat(v: [f64; 4]) -> Self {
        Tensor2([[v[0], v[1]], [v[2], v[3]]])
    }

    pub fn to_flat(&self) -> [f64; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }

    pub fn transpose(&self) -> Self {
        Tensor2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn sym(&self) -> Self {
        let off = 0.5 * (self.0[0][1] + self.0[1][0]);
        Tensor2([[self.0[0][0], off], [off, self.0[1][1]]])
    }

    pub fn skew(&self) -> Self {
        let off = 0.5 * (self.0[0][1] - self.0[1][0]);
        Tensor2([[0.0, off], [-off, 0.0]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// In-plane deviator `a - tr(a)/2 I`.
    pub fn dev(&self) -> Self {
        let m = 0.5 * self.trace();
        *self - Tensor2::IDENTITY * m
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Tensor2([
            [self.0[1][1] / d, -self.0[0][1] / d],
            [-self.0[1][0] / d, self.0[0][0] / d],
        ]))
    }

    pub fn dot(&self, other: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * other.0[0][j] + self.0[i][1] * other.0[1][j];
            }
        }
        out
    }

    /// Double contraction `a : b`.
    pub fn ddot(&self, other: &Tensor2) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for Tensor2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Tensor2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(mut self, rhs: Tensor2) -> Tensor2 {
        self += rhs;
        self
    }
}

impl AddAssign for Tensor2 {
    fn add_assign(&mut self, rhs: Tensor2) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(mut self, rhs: Tensor2) -> Tensor2 {
        self -= rhs;
        self
    }
}

impl SubAssign for Tensor2 {
    fn sub_assign(&mut self, rhs: Tensor2) {
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;
    fn mul(mut self, s: f64) -> Tensor2 {
        for row in self.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        self
    }
}

impl Neg for Tensor2 {
    type Output = Tensor2;
    fn neg(self) -> Tensor2 {
        self * -1.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tensor4(pub [[[[f64; 2]; 2]; 2]; 2]);

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

impl Tensor4 {
    pub const ZERO: Tensor4 = Tensor4([[[[0.0; 2]; 2]; 2]; 2]);

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor4::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        t.0[i][j][k][l] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    /// `I_ijkl = delta_ik delta_jl`
    pub fn identity() -> Self {
        Self::from_fn(|i, j, k, l| delta(i, k) * delta(j, l))
    }

    /// `T_ijkl = delta_il delta_jk`, maps `a` to `a^T`.
    pub fn transposer() -> Self {
        Self::from_fn(|i, j, k, l| delta(i, l) * delta(j, k))
    }

    /// Symmetrizing projector `(I + T) / 2`.
    pub fn sym_identity() -> Self {
        Self::from_fn(|i, j, k, l| 0.5 * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k)))
    }

    /// Dyadic product `a ⊗ b`.
    pub fn outer(a: &Tensor2, b: &Tensor2) -> Self {
        Self::from_fn(|i, j, k, l| a.0[i][j] * b.0[k][l])
    }

    /// `C : a`
    pub fn contract(&self, a: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = 0.0;
                for k in 0..2 {
                    for l in 0..2 {
                        s += self.0[i][j][k][l] * a.0[k][l];
                    }
                }
                out.0[i][j] = s;
            }
        }
        out
    }

    /// Quadratic form `a : C : a`.
    pub fn quadratic(&self, a: &Tensor2) -> f64 {
        a.ddot(&self.contract(a))
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[i][j][k][l]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().flatten().flatten().all(|v| v.is_finite())
    }

    /// 4x4 matrix acting on row-major flattened tensors.
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[2 * i + j][2 * k + l] = self.0[i][j][k][l];
                    }
                }
            }
        }
        m
    }

    /// Largest absolute difference between entries.
    pub fn max_abs_diff(&self, other: &Tensor4) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m = m.max((self.0[i][j][k][l] - other.0[i][j][k][l]).abs());
                    }
                }
            }
        }
        m
    }
}

impl Add for Tensor4 {
    type Output = Tensor4;
    fn add(self, rhs: Tensor4) -> Tensor4 {
        Tensor4::from_fn(|i, j, k, l| self.0[i][j][k][l] + rhs.0[i][j][k][l])
    }
}

impl Sub for Tensor4 {
    type Output = Tensor4;
    fn sub(self, rhs: Tensor4) -> Tensor4 {
        Tensor4::from_fn(|i, j, k, l| self.0[i][j][k][l] - rhs.0[i][j][k][l])
    }
}

impl Mul<f64> for Tensor4 {
    type Output = Tensor4;
    fn mul(self, s: f64) -> Tensor4 {
        Tensor4::from_fn(|i, j, k, l| self.0[i][j][k][l] * s)
    }
}

//! Discrete error norms, convergence rates and manufactured forcing.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::constitutive::{HenckyParams, Law};
use crate::error::{Error, Result};
use crate::mesh::{Point, PolyMesh};
use crate::tensor::Tensor2;

type VectorFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;
type GradientFn = Arc<dyn Fn(Point) -> Tensor2 + Send + Sync>;

/// A closed-form displacement field with the law that produces it.
#[derive(Clone)]
pub struct ManufacturedCase {
    pub name: String,
    pub law: Law,
    displacement: VectorFn,
    gradient: GradientFn,
    body_force: Option<VectorFn>,
}

impl std::fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedCase")
            .field("name", &self.name)
            .field("law", &self.law)
            .finish_non_exhaustive()
    }
}

fn sine_case(name: &str, law: Law, amp: f64) -> ManufacturedCase {
    ManufacturedCase::new(
        name,
        law,
        move |x| {
            let s = amp * (PI * x[0]).sin() * (PI * x[1]).sin();
            [s, s]
        },
        move |x| {
            let gx = amp * PI * (PI * x[0]).cos() * (PI * x[1]).sin();
            let gy = amp * PI * (PI * x[0]).sin() * (PI * x[1]).cos();
            Tensor2::new(gx, gy, gx, gy)
        },
    )
}

fn bubble_case(name: &str, law: Law, amp: f64) -> ManufacturedCase {
    ManufacturedCase::new(
        name,
        law,
        move |x| {
            let s = amp * x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
            [s, s]
        },
        move |x| {
            let gx = amp * (1.0 - 2.0 * x[0]) * x[1] * (1.0 - x[1]);
            let gy = amp * x[0] * (1.0 - x[0]) * (1.0 - 2.0 * x[1]);
            Tensor2::new(gx, gy, gx, gy)
        },
    )
}

impl ManufacturedCase {
    pub fn new(
        name: &str,
        law: Law,
        displacement: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static,
        gradient: impl Fn(Point) -> Tensor2 + Send + Sync + 'static,
    ) -> Self {
        ManufacturedCase {
            name: name.to_string(),
            law,
            displacement: Arc::new(displacement),
            gradient: Arc::new(gradient),
            body_force: None,
        }
    }

    /// Uses a closed-form body force instead of differentiating the stress numerically.
    pub fn with_body_force(mut self, f: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.body_force = Some(Arc::new(f));
        self
    }

    /// `u1 = u2 = sin(pi x) sin(pi y)` with the Hencky-von Mises law.
    pub fn hencky() -> Self {
        sine_case("hencky", Law::HenckyVonMises(HenckyParams::default()), 1.0)
    }

    /// `u1 = u2 = 10 sin(pi x) sin(pi y)` with the benchmark law.
    pub fn benchmark() -> Self {
        sine_case("benchmark", Law::Benchmark, 10.0)
    }

    /// `u1 = u2 = x(1-x)y(1-y)` with the benchmark law.
    pub fn case1() -> Self {
        bubble_case("case1", Law::Benchmark, 1.0)
    }

    /// `u1 = u2 = 80 x(1-x)y(1-y)` with the benchmark law.
    pub fn case2() -> Self {
        bubble_case("case2", Law::Benchmark, 80.0)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "hencky" => Ok(Self::hencky()),
            "benchmark" => Ok(Self::benchmark()),
            "case1" => Ok(Self::case1()),
            "case2" => Ok(Self::case2()),
            other => Err(Error::InvalidParameter(format!("unknown manufactured case `{other}`"))),
        }
    }

    /// Same displacement field with another law.
    pub fn with_law(mut self, law: Law) -> Self {
        self.law = law;
        self.body_force = None;
        self
    }

    pub fn displacement(&self, x: Point) -> [f64; 2] {
        (self.displacement)(x)
    }

    pub fn gradient(&self, x: Point) -> Tensor2 {
        (self.gradient)(x)
    }

    /// `-div sigma(grad u)` at `x`.
    pub fn body_force(&self, x: Point) -> Result<[f64; 2]> {
        match &self.body_force {
            Some(f) => Ok(f(x)),
            None => manufactured_body_force(self, x),
        }
    }

    /// Vertex values of the exact solution.
    pub fn sample(&self, mesh: &PolyMesh) -> Vec<f64> {
        mesh.vertices().iter().flat_map(|&x| self.displacement(x)).collect()
    }
}

/// Relative step of the stress differences in [`manufactured_body_force`].
pub const BODY_FORCE_STEP: f64 = 1e-5;

/// `-div sigma` by central differences of `y -> sigma(grad u(y))`.
pub fn manufactured_body_force(case: &ManufacturedCase, x: Point) -> Result<[f64; 2]> {
    manufactured_body_force_with_step(case, x, BODY_FORCE_STEP)
}

pub fn manufactured_body_force_with_step(case: &ManufacturedCase, x: Point, step: f64) -> Result<[f64; 2]> {
    let h = step * (1.0 + x[0].abs().max(x[1].abs()));
    let stress = |y: Point| case.law.evaluate_elastic(&case.gradient(y)).map(|r| r.stress);
    let mut div = [0.0; 2];
    for j in 0..2 {
        let mut p = x;
        p[j] += h;
        let mut m = x;
        m[j] -= h;
        let d = (stress(p)? - stress(m)?) * (0.5 / h);
        for (i, di) in div.iter_mut().enumerate() {
            *di += d.0[i][j];
        }
    }
    Ok([-div[0], -div[1]])
}

/// Largest nodal component error.
pub fn error_0_inf(mesh: &PolyMesh, u_h: &[f64], exact: impl Fn(Point) -> [f64; 2]) -> f64 {
    mesh.vertices()
        .iter()
        .enumerate()
        .map(|(v, &x)| {
            let u = exact(x);
            (u_h[2 * v] - u[0]).abs().max((u_h[2 * v + 1] - u[1]).abs())
        })
        .fold(0.0, f64::max)
}

/// Largest nodal component error divided by the largest nodal exact component.
pub fn relative_error_inf(mesh: &PolyMesh, u_h: &[f64], exact: impl Fn(Point) -> [f64; 2]) -> Result<f64> {
    let scale = mesh
        .vertices()
        .iter()
        .map(|&x| {
            let u = exact(x);
            u[0].abs().max(u[1].abs())
        })
        .fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::InvalidInput("exact solution vanishes at every vertex".into()));
    }
    Ok(error_0_inf(mesh, u_h, exact) / scale)
}

const GAUSS3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// Discrete H1-like norm `(sum_e h_e |d(u_h - u)/dt|^2_{0,e})^(1/2)` over all mesh edges.
pub fn error_1_2(mesh: &PolyMesh, u_h: &[f64], exact_gradient: impl Fn(Point) -> Tensor2) -> f64 {
    let xs = mesh.vertices();
    let mut sum = 0.0;
    for (a, b) in mesh.edges() {
        let (pa, pb) = (xs[a], xs[b]);
        let d = [pb[0] - pa[0], pb[1] - pa[1]];
        let h = d[0].hypot(d[1]);
        let t = [d[0] / h, d[1] / h];
        let dh = [(u_h[2 * b] - u_h[2 * a]) / h, (u_h[2 * b + 1] - u_h[2 * a + 1]) / h];
        let mut integral = 0.0;
        for (s, w) in GAUSS3 {
            let g = exact_gradient([pa[0] + s * d[0], pa[1] + s * d[1]]);
            for i in 0..2 {
                let e = dh[i] - (g.0[i][0] * t[0] + g.0[i][1] * t[1]);
                integral += w * h * e * e;
            }
        }
        sum += h * integral;
    }
    sum.sqrt()
}

/// `R = -2 log(E / E') / log(N_h / N_h')` for each consecutive pair.
pub fn convergence_rate(rows: &[(usize, f64)]) -> Result<Vec<f64>> {
    if let Some(&(n, e)) = rows.iter().find(|(_, e)| !(*e > 0.0)) {
        return Err(Error::UndefinedRate(format!("error {e} at N_h = {n} is not positive")));
    }
    rows.windows(2)
        .map(|w| {
            let ((n0, e0), (n1, e1)) = (w[0], w[1]);
            if n1 == n0 {
                return Err(Error::UndefinedRate(format!("repeated N_h = {n0}")));
            }
            Ok(-2.0 * (e1 / e0).ln() / (n1 as f64 / n0 as f64).ln())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n_h: usize,
    pub e_0inf: f64,
    pub r_0inf: Option<f64>,
    pub e_12: f64,
    pub r_12: Option<f64>,
}

/// Attaches rates to `(N_h, E_0inf, E_12)` triples.
pub fn convergence_rows(errors: &[(usize, f64, f64)]) -> Result<Vec<ConvergenceRow>> {
    let r0 = convergence_rate(&errors.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>())?;
    let r1 = convergence_rate(&errors.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>())?;
    Ok(errors
        .iter()
        .enumerate()
        .map(|(k, &(n_h, e_0inf, e_12))| ConvergenceRow {
            n_h,
            e_0inf,
            r_0inf: k.checked_sub(1).map(|j| r0[j]),
            e_12,
            r_12: k.checked_sub(1).map(|j| r1[j]),
        })
        .collect())
}

pub const CONVERGENCE_CSV_HEADER: &str = "N_h,E_0inf,R_0inf,E_12,R_12";

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let rate = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
    let mut out = String::from(CONVERGENCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{:.6e},{},{:.6e},{}", r.n_h, r.e_0inf, rate(r.r_0inf), r.e_12, rate(r.r_12));
    }
    out
}

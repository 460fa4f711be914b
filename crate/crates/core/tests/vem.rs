use approx::assert_relative_eq;
use nalgebra::DVector;
use polyvem::constitutive::{HenckyParams, Law};
use polyvem::vem::{alpha_param, local_residual, local_tangent, pi0_grad, pi_nabla, stab_matrix, vertex_load_weights, AlphaNorm};
use polyvem::{ElementGeometry, Tensor2};

fn geom(pts: &[[f64; 2]]) -> ElementGeometry {
    ElementGeometry::from_polygon(pts.to_vec(), 0).unwrap()
}

fn unit_square() -> ElementGeometry {
    geom(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
}

fn pentagon() -> ElementGeometry {
    geom(&[[0.0, 0.0], [1.2, 0.1], [1.5, 0.9], [0.6, 1.4], [-0.2, 0.8]])
}

fn sample(geom: &ElementGeometry, f: impl Fn([f64; 2]) -> [f64; 2]) -> Vec<f64> {
    geom.coords.iter().flat_map(|&p| f(p)).collect()
}

#[test]
fn gradient_projection_examples() {
    let sq = unit_square();
    let g = pi0_grad(&sq, &sample(&sq, |p| [p[0], 0.0]));
    assert!((g - Tensor2::new(1.0, 0.0, 0.0, 0.0)).max_abs() < 1e-15);
    assert_eq!(pi0_grad(&sq, &sample(&sq, |_| [0.3, -2.0])).max_abs(), 0.0);
}

#[test]
fn pi_nabla_examples() {
    let p = pentagon();
    let q = sample(&p, |x| [1.0 + 2.0 * x[0] - x[1], 0.5 * x[0] + 3.0 * x[1]]);
    for (a, b) in pi_nabla(&p, &q).iter().zip(&q) {
        assert_relative_eq!(a, b, epsilon = 1e-13);
    }
}

#[test]
fn hourglass_is_penalized() {
    let sq = unit_square();
    let s = stab_matrix(&sq);
    let lin = DVector::from_vec(sample(&sq, |p| [p[0], p[1]]));
    assert!(lin.dot(&(&s * &lin)).abs() < 1e-14);
    let hg = DVector::from_vec(vec![1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0]);
    assert!(pi0_grad(&sq, hg.as_slice()).max_abs() < 1e-15);
    assert_relative_eq!(hg.dot(&(&s * &hg)), 4.0, epsilon = 1e-13);
}

#[test]
fn alpha_examples() {
    let p = pentagon();
    let s = sample(&p, |x| [0.1 * x[0] * x[1], -0.05 * x[0]]);
    let lin = Law::LinearElastic { lambda: 1.0, mu: 1.0 };
    assert_relative_eq!(alpha_param(&lin, None, &p, &s, AlphaNorm::MaxEntry).unwrap(), 3.0, epsilon = 1e-14);
    let zero = vec![0.0; s.len()];
    assert_relative_eq!(alpha_param(&Law::Benchmark, None, &p, &zero, AlphaNorm::MaxEntry).unwrap(), 3e4, max_relative = 1e-14);

    let law = Law::HenckyVonMises(HenckyParams::default());
    let shifted: Vec<f64> = s.iter().enumerate().map(|(i, v)| v + if i % 2 == 0 { 5.0 } else { -2.0 }).collect();
    let a = alpha_param(&law, None, &p, &s, AlphaNorm::MaxEntry).unwrap();
    let b = alpha_param(&law, None, &p, &shifted, AlphaNorm::MaxEntry).unwrap();
    assert_relative_eq!(a, b, max_relative = 1e-12);
}

#[test]
fn load_weight_examples() {
    let t = geom(&[[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]);
    for w in vertex_load_weights(&t).unwrap() {
        assert_relative_eq!(w, 1.0 / 3.0, epsilon = 1e-15);
    }
    for w in vertex_load_weights(&unit_square()).unwrap() {
        assert_relative_eq!(w, 0.25, epsilon = 1e-15);
    }
}

#[test]
fn residual_examples() {
    let p = pentagon();
    let law = Law::Benchmark;
    let zero = vec![0.0; 10];
    let trans = sample(&p, |_| [0.7, -0.4]);
    let (f, _) = local_residual(&law, &p, &trans, &zero, None, None).unwrap();
    assert!(f.amax() < 1e-12 * 3e4, "{}", f.amax());

    // constant-stress consistency: F . w = |E| sigma : grad w for the linear field q
    let g = Tensor2::new(0.02, 0.01, -0.03, 0.015);
    let q = sample(&p, |x| [g.0[0][0] * x[0] + g.0[0][1] * x[1], g.0[1][0] * x[0] + g.0[1][1] * x[1]]);
    let (f, _) = local_residual(&law, &p, &q, &zero, None, None).unwrap();
    let sigma = law.evaluate_elastic(&g).unwrap().stress;
    for k in 0..10 {
        let mut w = vec![0.0; 10];
        w[k] = 1.0;
        let expected = p.area * sigma.ddot(&pi0_grad(&p, &w));
        assert_relative_eq!(f[k], expected, epsilon = 1e-10 * sigma.max_abs());
    }
}

#[test]
fn tangent_is_constant_for_linear_law_and_matches_differences() {
    let p = pentagon();
    let lin = Law::LinearElastic { lambda: 1.3, mu: 0.6 };
    let s = vec![0.0; 10];
    let u1: Vec<f64> = (0..10).map(|i| (i as f64 * 0.37).sin() * 0.01).collect();
    let u2: Vec<f64> = (0..10).map(|i| (i as f64 * 1.1).cos() * 0.02).collect();
    let k1 = local_tangent(&lin, &p, &u1, &s, None, None).unwrap();
    let k2 = local_tangent(&lin, &p, &u2, &s, None, None).unwrap();
    assert!((&k1 - &k2).amax() < 1e-14);

    let law = Law::HenckyVonMises(HenckyParams::default());
    let k = local_tangent(&law, &p, &u1, &s, None, None).unwrap();
    let h = 1e-7;
    for j in 0..10 {
        let mut up = u1.clone();
        let mut dn = u1.clone();
        up[j] += h;
        dn[j] -= h;
        let fp = local_residual(&law, &p, &up, &s, None, None).unwrap().0;
        let fm = local_residual(&law, &p, &dn, &s, None, None).unwrap().0;
        let col = (fp - fm) / (2.0 * h);
        assert!((col - k.column(j)).amax() <= 1e-6 * k.amax());
    }
}

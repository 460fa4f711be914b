use std::f64::consts::PI;

use approx::assert_relative_eq;
use polyvem::analysis::{
    convergence_csv, convergence_rate, convergence_rows, error_0_inf, error_1_2, manufactured_body_force_with_step,
    relative_error_inf, ManufacturedCase, CONVERGENCE_CSV_HEADER,
};
use polyvem::constitutive::Law;
use polyvem::mesh::{generate_structured, StructuredKind};
use polyvem::studies::{solve_manufactured, ManufacturedSettings};
use polyvem::{Error, Tensor2};

#[test]
fn published_rate_example() {
    let r = convergence_rate(&[(4225, 1.0516e-4), (16641, 2.6254e-5)]).unwrap();
    assert!((r[0] - 2.02).abs() < 0.01, "{r:?}");
    assert!(matches!(convergence_rate(&[(9, 1e-3), (9, 1e-4)]), Err(Error::UndefinedRate(_))));
    assert!(matches!(convergence_rate(&[(9, 0.0), (25, 1e-4)]), Err(Error::UndefinedRate(_))));
}

#[test]
fn single_edge_jump() {
    // one square: moving a corner by d adds d^2 on each of its two edges
    let m = generate_structured(StructuredKind::Square, 1).unwrap();
    let mut uh = vec![0.0; 8];
    uh[1] = 0.4;
    assert_relative_eq!(error_1_2(&m, &uh, |_| Tensor2::ZERO), (2.0f64 * 0.16).sqrt(), epsilon = 1e-14);
    assert_relative_eq!(error_0_inf(&m, &uh, |_| [0.0, 0.0]), 0.4);
    assert!(relative_error_inf(&m, &uh, |_| [0.0, 0.0]).is_err());
}

#[test]
fn sine_forcing_matches_closed_form() {
    let (lambda, mu) = (3.0, 0.5);
    let case = ManufacturedCase::new(
        "sine-x",
        Law::LinearElastic { lambda, mu },
        |x| [(PI * x[0]).sin() * (PI * x[1]).sin(), 0.0],
        |x| {
            let gx = PI * (PI * x[0]).cos() * (PI * x[1]).sin();
            let gy = PI * (PI * x[0]).sin() * (PI * x[1]).cos();
            Tensor2::new(gx, gy, 0.0, 0.0)
        },
    );
    for x in [[0.2, 0.7], [0.55, 0.15], [0.9, 0.9]] {
        let ss = (PI * x[0]).sin() * (PI * x[1]).sin();
        let cc = (PI * x[0]).cos() * (PI * x[1]).cos();
        let f = case.body_force(x).unwrap();
        assert_relative_eq!(f[0], PI * PI * (lambda + 3.0 * mu) * ss, max_relative = 1e-6);
        assert_relative_eq!(f[1], -PI * PI * (lambda + mu) * cc, max_relative = 1e-6);
    }
}

#[test]
fn forcing_step_is_resolved() {
    let case = ManufacturedCase::hencky();
    let x = [0.3, 0.45];
    let a = manufactured_body_force_with_step(&case, x, 1e-4).unwrap();
    let b = manufactured_body_force_with_step(&case, x, 5e-5).unwrap();
    let c = case.body_force(x).unwrap();
    for i in 0..2 {
        assert_relative_eq!(a[i], b[i], max_relative = 1e-6);
        assert_relative_eq!(b[i], c[i], max_relative = 1e-6);
    }
}

#[test]
fn linear_solution_is_reproduced() {
    let a = Tensor2::new(0.01, -0.02, 0.005, 0.015);
    let case = ManufacturedCase::new(
        "linear",
        Law::Benchmark,
        move |x| [a.0[0][0] * x[0] + a.0[0][1] * x[1], a.0[1][0] * x[0] + a.0[1][1] * x[1]],
        move |_| a,
    )
    .with_body_force(|_| [0.0, 0.0]);
    let mesh = generate_structured(StructuredKind::Chevron, 4).unwrap();
    let (_, e) = solve_manufactured(&case, &mesh, &ManufacturedSettings::default()).unwrap();
    assert!(e.e_0inf < 1e-12 && e.e_12 < 1e-12, "{e:?}");
}

#[test]
fn coarse_study_csv() {
    let case = ManufacturedCase::hencky();
    let settings = ManufacturedSettings {
        steps: 1,
        ..Default::default()
    };
    let errors: Vec<_> = [4, 8, 16]
        .iter()
        .map(|&n| {
            let mesh = generate_structured(StructuredKind::Square, n).unwrap();
            let (_, e) = solve_manufactured(&case, &mesh, &settings).unwrap();
            (e.n_h, e.e_0inf, e.e_12)
        })
        .collect();
    let rows = convergence_rows(&errors).unwrap();
    assert!(rows[2].r_0inf.unwrap() > 1.5 && rows[2].r_12.unwrap() > 0.8, "{rows:?}");
    let csv = convergence_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CONVERGENCE_CSV_HEADER));
    assert_eq!(lines.count(), 3);
}

use approx::assert_relative_eq;
use polyvem::mesh::{
    element_geometry, generate_structured, load_mesh, quarter_strip_mesh, serialize_mesh, validate, StripGeometry,
    StructuredKind,
};
use polyvem::{Error, PolyMesh};

const ALL_KINDS: [StructuredKind; 4] = [
    StructuredKind::Square,
    StructuredKind::Trapezoid,
    StructuredKind::HexStructured,
    StructuredKind::Chevron,
];

#[test]
fn square_grids() {
    let m = generate_structured(StructuredKind::Square, 1).unwrap();
    assert_eq!((m.num_cells(), m.num_vertices()), (1, 4));
    assert_relative_eq!(m.total_area(), 1.0, epsilon = 1e-15);
    let m = generate_structured(StructuredKind::Square, 4).unwrap();
    assert_eq!((m.num_vertices(), m.num_cells()), (25, 16));
}

#[test]
fn zero_refinement_is_rejected() {
    for kind in ALL_KINDS {
        assert!(matches!(generate_structured(kind, 0), Err(Error::InvalidParameter(_))));
    }
}

#[test]
fn trapezoids_are_congruent_to_the_prototype() {
    let m = generate_structured(StructuredKind::Trapezoid, 4).unwrap();
    assert_eq!(m.num_cells(), 16);
    assert_relative_eq!(m.total_area(), 1.0, epsilon = 1e-12);
    // prototype (0,0),(1/2,0),(1/2,2/3),(0,1/3) scaled by 1/2
    let side_lengths = |c: usize| {
        let g = element_geometry(&m, c).unwrap();
        let mut l: Vec<f64> = g.edges.iter().map(|e| e.length).collect();
        l.sort_by(f64::total_cmp);
        l
    };
    let mut proto = vec![0.25, 1.0 / 6.0, 1.0 / 3.0, (0.0625f64 + 1.0 / 36.0).sqrt()];
    proto.sort_by(f64::total_cmp);
    for c in 0..m.num_cells() {
        for (a, b) in side_lengths(c).iter().zip(&proto) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        assert_relative_eq!(element_geometry(&m, c).unwrap().area, 1.0 / 16.0, epsilon = 1e-14);
    }
}

#[test]
fn generated_meshes_tile_the_square() {
    for kind in ALL_KINDS {
        for n in [2, 4, 8] {
            let m = generate_structured(kind, n).unwrap();
            assert_relative_eq!(m.total_area(), 1.0, max_relative = 1e-12);
            for c in 0..m.num_cells() {
                let s = element_geometry(&m, c).unwrap().normal_sum();
                assert!(s[0].abs() < 1e-12 && s[1].abs() < 1e-12);
            }
            assert_eq!(load_mesh(&serialize_mesh(&m)).unwrap(), m);
        }
    }
}

#[test]
fn element_geometry_examples() {
    let sq = generate_structured(StructuredKind::Square, 1).unwrap();
    let g = element_geometry(&sq, 0).unwrap();
    assert_relative_eq!(g.area, 1.0);
    assert_relative_eq!(g.diameter, 2f64.sqrt());
    let mut normals: Vec<[i64; 2]> = g
        .edges
        .iter()
        .map(|e| [e.normal[0].round() as i64, e.normal[1].round() as i64])
        .collect();
    normals.sort();
    assert_eq!(normals, vec![[-1, 0], [0, -1], [0, 1], [1, 0]]);

    let tri = load_mesh("polymesh 2d\nv 0 0\nv 1 0\nv 0 1\nc 0 1 2\nb 0 1 g\nb 1 2 g\nb 2 0 g\n").unwrap();
    let g = element_geometry(&tri, 0).unwrap();
    assert_relative_eq!(g.area, 0.5);
    assert_relative_eq!(g.diameter, 2f64.sqrt());

    let hex: Vec<String> = (0..6)
        .map(|k| {
            let t = std::f64::consts::PI / 3.0 * k as f64;
            format!("v {} {}\n", t.cos(), t.sin())
        })
        .collect();
    let text = format!(
        "polymesh 2d\n{}c 0 1 2 3 4 5\n{}",
        hex.concat(),
        (0..6).map(|k| format!("b {k} {} g\n", (k + 1) % 6)).collect::<String>()
    );
    let g = element_geometry(&load_mesh(&text).unwrap(), 0).unwrap();
    assert_relative_eq!(g.area, 1.5 * 3f64.sqrt(), epsilon = 1e-14);
    assert_relative_eq!(g.diameter, 2.0, epsilon = 1e-14);
}

#[test]
fn degenerate_cells_are_rejected() {
    let text = "polymesh 2d\nv 0 0\nv 1 0\nv 2 0\nc 0 1 2\nb 0 1 g\nb 1 2 g\nb 2 0 g\n";
    assert!(load_mesh(text).is_err());
}

#[test]
fn parse_errors_name_the_problem() {
    let text = "polymesh 2d\nv 0 0\nv 1 0\nv 0 1\nc 0 1 7\n";
    match load_mesh(text) {
        Err(Error::Parse { line, msg }) => {
            assert_eq!(line, 5);
            assert!(msg.contains("cell"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(load_mesh("v 0 0\n"), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(load_mesh("polymesh 2d\nv 0 zero\n"), Err(Error::Parse { line: 2, .. })));
}

/// Central diamond surrounded by four pentagons.
const FIVE_CELLS: &str = "\
polymesh 2d
# corners
v 0 0
v 1 0
v 1 1
v 0 1
# diamond
v 0.5 0.2
v 0.8 0.5
v 0.5 0.8
v 0.2 0.5
# edge midpoints
v 0.5 0
v 1 0.5
v 0.5 1
v 0 0.5
c 0 8 4 7 11
c 8 1 9 5 4
c 9 2 10 6 5
c 10 3 11 7 6
c 4 5 6 7
b 0 8 bottom
b 8 1 bottom
b 1 9 right
b 9 2 right
b 2 10 top
b 10 3 top
b 3 11 left
b 11 0 left
";

#[test]
fn hand_written_voronoi_like_mesh() {
    let m = load_mesh(FIVE_CELLS).unwrap();
    assert_eq!(m.num_cells(), 5);
    assert_relative_eq!(m.total_area(), 1.0, epsilon = 1e-14);
    assert_eq!(m.boundary_vertices().len(), 8);
    assert!(validate(&m).all_star_shaped());
}

#[test]
fn open_boundary_is_rejected() {
    let text: String = FIVE_CELLS.lines().filter(|l| *l != "b 11 0 left").map(|l| format!("{l}\n")).collect();
    assert!(load_mesh(&text).is_err());
}

#[test]
fn quality_examples() {
    let r = validate(&generate_structured(StructuredKind::Square, 4).unwrap());
    assert!(r.all_star_shaped());
    assert_relative_eq!(r.min_edge_ratio(), 0.5f64.sqrt(), epsilon = 1e-12);
    assert!(validate(&generate_structured(StructuredKind::HexStructured, 8).unwrap()).all_star_shaped());

    // L-shaped hexagon whose vertex centroid lies outside the kernel
    let l = PolyMesh::with_boundary_labels(
        vec![[0.0, 0.0], [4.0, 0.0], [4.0, 0.2], [0.2, 0.2], [0.2, 4.0], [0.0, 4.0]],
        vec![vec![0, 1, 2, 3, 4, 5]],
        |_, _| "g".into(),
    )
    .unwrap();
    assert!(!validate(&l).all_star_shaped());
}

#[test]
fn strip_mesh_carries_symmetry_labels() {
    let geom = StripGeometry::default();
    for tri in [false, true] {
        let m = quarter_strip_mesh(&geom, 8, tri).unwrap();
        for label in ["sym_x", "sym_y", "top", "right", "hole"] {
            assert!(!m.vertices_with_label(label).is_empty(), "{label}");
        }
        assert!(m.find_vertex(geom.point_a(), 1e-9).is_some());
        assert!(m.find_vertex(geom.point_b(), 1e-9).is_some());
        // polygonal hole: area a bit above the exact value, converging with refinement
        assert!(m.total_area() > geom.area());
    }
    let coarse = quarter_strip_mesh(&geom, 8, false).unwrap().total_area() - geom.area();
    let fine = quarter_strip_mesh(&geom, 16, false).unwrap().total_area() - geom.area();
    assert!(fine < coarse / 3.0);
}

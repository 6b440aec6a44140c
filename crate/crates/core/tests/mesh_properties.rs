use std::f64::consts::PI;

use acoustoelastic::mesh::{generate_disk_annulus, generate_graded_disk, load_mesh, parse_mesh, write_mesh};
use acoustoelastic::{BoundaryTag, Mesh, Region};

fn unit_radial(x: [f64; 2]) -> [f64; 2] {
    let r = x[0].hypot(x[1]);
    [x[0] / r, x[1] / r]
}

fn midpoint(mesh: &Mesh, e: [usize; 2]) -> [f64; 2] {
    let [p, q] = e.map(|v| mesh.vertices()[v]);
    [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]
}

#[test]
fn boundary_normals_are_radial_and_outward() {
    let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 8, 64).unwrap();
    for edge in mesh.boundary_edges() {
        let r = unit_radial(midpoint(&mesh, edge.vertices));
        let dot = edge.normal[0] * r[0] + edge.normal[1] * r[1];
        assert!(dot >= 0.99, "{:?} edge {:?}: {dot}", edge.tag, edge.vertices);
    }
}

#[test]
fn interface_length_approaches_the_circumference() {
    let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 8, 64).unwrap();
    let length: f64 = mesh.interface_edges().map(|e| e.length(&mesh)).sum();
    assert!((length - PI).abs() < 0.02 * PI, "{length}");
    let outer: f64 = mesh.outer_edges().map(|e| e.length(&mesh)).sum();
    assert!((outer - 4.0 * PI).abs() < 0.02 * 4.0 * PI, "{outer}");
}

#[test]
fn doubling_resolution_quadruples_the_cells() {
    let coarse = generate_disk_annulus(0.5, 1.0, 2.0, 6, 24).unwrap();
    let fine = generate_disk_annulus(0.5, 1.0, 2.0, 12, 48).unwrap();
    let ratio = fine.cells().len() as f64 / coarse.cells().len() as f64;
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    assert!(fine.max_edge_length() < 0.6 * coarse.max_edge_length());
}

#[test]
fn regions_partition_the_disk() {
    let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 12, 96).unwrap();
    let solid = mesh.region_area(Region::Elastic);
    let fluid = mesh.region_area(Region::Fluid);
    assert!((solid - 0.25 * PI).abs() < 0.01 * 0.25 * PI);
    assert!((solid + fluid - 4.0 * PI).abs() < 0.01 * 4.0 * PI);
    for (c, region) in mesh.regions().iter().enumerate() {
        let [p, q, s] = mesh.cell_corners(c);
        let centroid = [(p[0] + q[0] + s[0]) / 3.0, (p[1] + q[1] + s[1]) / 3.0];
        let r = centroid[0].hypot(centroid[1]);
        assert_eq!(*region == Region::Elastic, r < 0.5, "cell {c} at r = {r}");
        assert!(mesh.cell_area(c) > 0.0);
    }
    assert!(mesh.min_angle_degrees() > 10.0);
}

#[test]
fn vertices_stay_inside_the_outer_circle() {
    for outer in [2.0, 6.0, 7.3] {
        let mesh = generate_graded_disk(0.5, 1.0, 2.0, outer, 6, 24).unwrap();
        for v in mesh.vertices() {
            assert!(v[0].hypot(v[1]) <= outer);
            assert!((v[0] * v[0] + v[1] * v[1]).sqrt() <= outer);
        }
        let on_outer = mesh.vertices_on(BoundaryTag::Outer);
        for (v, &flag) in mesh.vertices().iter().zip(&on_outer) {
            if flag {
                assert!((v[0].hypot(v[1]) - outer).abs() < 1e-12 * outer);
            }
        }
    }
}

#[test]
fn graded_disk_matches_the_compact_mesh_inside_a() {
    let compact = generate_disk_annulus(0.5, 1.0, 2.0, 6, 24).unwrap();
    let graded = generate_graded_disk(0.5, 1.0, 2.0, 6.0, 6, 24).unwrap();
    let inside = |m: &Mesh| {
        let mut pts: Vec<[f64; 2]> = m.vertices().iter().copied().filter(|v| v[0].hypot(v[1]) <= 1.0 + 1e-12).collect();
        pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        pts
    };
    assert_eq!(inside(&compact), inside(&graded));
}

#[test]
fn text_round_trip_preserves_the_mesh() {
    let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 4, 16).unwrap();
    let text = write_mesh(&mesh);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disk.mesh");
    std::fs::write(&path, &text).unwrap();
    let back = load_mesh(&path).unwrap();
    assert_eq!(back.vertices(), mesh.vertices());
    assert_eq!(back.cells(), mesh.cells());
    assert_eq!(back.regions(), mesh.regions());
    assert_eq!(write_mesh(&back), text);
    assert!(load_mesh(dir.path().join("missing.mesh")).is_err());
}

#[test]
fn truncated_mesh_text_is_rejected() {
    let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 4, 16).unwrap();
    let text = write_mesh(&mesh);
    let cut: String = text.lines().take(text.lines().count() / 2).map(|l| format!("{l}\n")).collect();
    assert!(parse_mesh(&cut).is_err());
}

#[test]
fn located_points_have_valid_barycentric_weights() {
    let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 6, 24).unwrap();
    for k in 0..50 {
        let t = k as f64 * 0.37;
        let r = 0.05 + 1.9 * (k as f64 / 50.0);
        let (cell, w) = mesh.locate([r * t.cos(), r * t.sin()]).unwrap();
        assert!(cell < mesh.cells().len());
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x >= -1e-12));
    }
    assert!(mesh.locate([2.5, 0.0]).is_none());
}

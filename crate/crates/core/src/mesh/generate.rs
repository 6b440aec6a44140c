use std::f64::consts::PI;

use super::{BoundaryTag, Mesh, Region};
use crate::error::{Error, Result};

/// Concentric rings of vertices around a centre vertex. Ring 0 is the
/// centre itself; cells inside `interface_ring` are elastic.
#[derive(Debug, Clone, PartialEq)]
pub struct RingLayout {
    pub radii: Vec<f64>,
    pub counts: Vec<usize>,
    pub interface_ring: usize,
}

impl RingLayout {
    /// Disk of radius `r_d` followed by uniform annulus layers up to `a` and
    /// then up to `b`, with a ring exactly at `a`.
    pub fn disk_annulus(r_d: f64, a: f64, b: f64, n_radial: usize, n_angular: usize) -> Result<Self> {
        if !(r_d > 0.0 && r_d < a && a < b) {
            return Err(Error::Config(format!(
                "mesh radii must satisfy 0 < r_D < a < b, got r_D = {r_d}, a = {a}, b = {b}"
            )));
        }
        if n_radial < 2 {
            return Err(Error::Config(format!("n_radial must be at least 2, got {n_radial}")));
        }
        if n_angular < 8 {
            return Err(Error::Config(format!("n_angular must be at least 8, got {n_angular}")));
        }
        let mut layout = Self::disk(r_d, n_angular);
        let inner = inner_layers(r_d, a, b, n_radial);
        layout.push_uniform(a, inner, n_angular);
        layout.push_uniform(b, n_radial - inner, n_angular);
        Ok(layout)
    }

    /// Same rings as [`RingLayout::disk_annulus`] up to `a`, then layers of
    /// the same radial spacing out to `outer`. The angular count doubles
    /// whenever the arc length exceeds twice the radial spacing.
    pub fn graded(r_d: f64, a: f64, b: f64, outer: f64, n_radial: usize, n_angular: usize) -> Result<Self> {
        if !(outer > a) {
            return Err(Error::Config(format!("outer radius {outer} must exceed a = {a}")));
        }
        let mut layout = Self::disk_annulus(r_d, a, b, n_radial, n_angular)?;
        let inner = inner_layers(r_d, a, b, n_radial);
        layout.radii.truncate(layout.radii.len() - (n_radial - inner));
        layout.counts.truncate(layout.radii.len());
        let dr = (a - r_d) / inner as f64;
        let layers = ((outer - a) / dr).ceil().max(1.0) as usize;
        let mut count = n_angular;
        for k in 1..=layers {
            let r = if k == layers { outer } else { a + (outer - a) * k as f64 / layers as f64 };
            if 2.0 * PI * r / count as f64 > 2.0 * dr {
                count *= 2;
            }
            layout.radii.push(r);
            layout.counts.push(count);
        }
        Ok(layout)
    }

    fn disk(r_d: f64, n_angular: usize) -> Self {
        let rings = ((n_angular as f64 / (2.0 * PI)).round() as usize).max(1);
        let mut radii = vec![0.0];
        let mut counts = vec![1];
        for k in 1..=rings {
            radii.push(if k == rings { r_d } else { r_d * k as f64 / rings as f64 });
            let n = if k == rings { n_angular } else { ((n_angular * k) as f64 / rings as f64).round() as usize };
            counts.push(n.max(6));
        }
        RingLayout { radii, counts, interface_ring: rings }
    }

    fn push_uniform(&mut self, to: f64, layers: usize, count: usize) {
        let from = *self.radii.last().unwrap();
        for k in 1..=layers {
            let r = if k == layers { to } else { from + (to - from) * k as f64 / layers as f64 };
            self.radii.push(r);
            self.counts.push(count);
        }
    }

    pub fn to_mesh(&self) -> Result<Mesh> {
        let mut vertices = vec![[0.0, 0.0]];
        let mut start = vec![0];
        for (&r, &n) in self.radii.iter().zip(&self.counts).skip(1) {
            start.push(vertices.len());
            for j in 0..n {
                let t = 2.0 * PI * j as f64 / n as f64;
                vertices.push(on_circle(r, t));
            }
        }
        let mut cells = Vec::new();
        let mut regions = Vec::new();
        for ring in 1..self.radii.len() {
            let region = if ring <= self.interface_ring { Region::Elastic } else { Region::Fluid };
            let before = cells.len();
            if ring == 1 {
                let n = self.counts[1];
                for j in 0..n {
                    cells.push([0, start[1] + j, start[1] + (j + 1) % n]);
                }
            } else {
                zipper(&mut cells, start[ring - 1], self.counts[ring - 1], start[ring], self.counts[ring]);
            }
            regions.extend(std::iter::repeat_n(region, cells.len() - before));
        }
        let mut boundary = Vec::new();
        let mut ring_edges = |ring: usize, tag| {
            let n = self.counts[ring];
            for j in 0..n {
                boundary.push(([start[ring] + j, start[ring] + (j + 1) % n], tag));
            }
        };
        if self.interface_ring + 1 < self.radii.len() {
            ring_edges(self.interface_ring, BoundaryTag::Interface);
        }
        ring_edges(self.radii.len() - 1, BoundaryTag::Outer);
        Ok(Mesh::new(vertices, cells, regions, boundary)?)
    }
}

fn inner_layers(r_d: f64, a: f64, b: f64, n_radial: usize) -> usize {
    let n = (n_radial as f64 * (a - r_d) / (b - r_d)).round() as usize;
    n.clamp(1, n_radial - 1)
}

/// Triangulates the band between two rings, walking both in angle order.
fn zipper(cells: &mut Vec<[usize; 3]>, s_in: usize, n_in: usize, s_out: usize, n_out: usize) {
    let angle = |k: usize, n: usize| k as f64 / n as f64;
    let (mut j, mut k) = (0, 0);
    while j < n_in || k < n_out {
        let advance_inner = k == n_out || (j < n_in && angle(j + 1, n_in) <= angle(k + 1, n_out));
        let (ij, ok) = (s_in + j % n_in, s_out + k % n_out);
        if advance_inner {
            cells.push([ij, ok, s_in + (j + 1) % n_in]);
            j += 1;
        } else {
            cells.push([ij, ok, s_out + (k + 1) % n_out]);
            k += 1;
        }
    }
}

/// Structured polar mesh of the disk of radius `b`: an elastic disk of
/// radius `r_d` inside a fluid annulus, with a ring of vertices at `a`.
pub fn generate_disk_annulus(r_d: f64, a: f64, b: f64, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    RingLayout::disk_annulus(r_d, a, b, n_radial, n_angular)?.to_mesh()
}

/// Mesh of the large disk of radius `outer` that coincides with
/// [`generate_disk_annulus`] for radii up to `a`.
pub fn generate_graded_disk(r_d: f64, a: f64, b: f64, outer: f64, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    RingLayout::graded(r_d, a, b, outer, n_radial, n_angular)?.to_mesh()
}

/// Point at angle `t` on the circle of radius `r`, nudged inward so that
/// its computed norm never exceeds `r`.
fn on_circle(r: f64, t: f64) -> [f64; 2] {
    let mut p = [r * t.cos(), r * t.sin()];
    while p[0].hypot(p[1]) > r || (p[0] * p[0] + p[1] * p[1]).sqrt() > r {
        p = [p[0] * (1.0 - f64::EPSILON), p[1] * (1.0 - f64::EPSILON)];
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_mesh_counts() {
        let mesh = generate_disk_annulus(0.5, 1.0, 2.0, 4, 16).unwrap();
        assert_eq!(mesh.outer_edges().count(), 16);
        assert_eq!(mesh.interface_edges().count(), 16);
        let (v, e, f) = (mesh.vertices().len(), mesh.edges().len(), mesh.cells().len());
        assert_eq!(v as i64 - e as i64 + f as i64, 1);
    }

    #[test]
    fn ring_at_inner_radius_is_exact() {
        let layout = RingLayout::disk_annulus(0.5, 1.0, 2.0, 24, 96).unwrap();
        assert!(layout.radii.contains(&1.0));
        assert_eq!(layout.radii[layout.interface_ring], 0.5);
        assert_eq!(*layout.radii.last().unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(generate_disk_annulus(1.0, 1.0, 2.0, 4, 16), Err(Error::Config(_))));
        assert!(matches!(generate_disk_annulus(0.5, 1.0, 0.9, 4, 16), Err(Error::Config(_))));
        assert!(matches!(generate_disk_annulus(0.5, 1.0, 2.0, 1, 16), Err(Error::Config(_))));
        assert!(matches!(generate_disk_annulus(0.5, 1.0, 2.0, 4, 7), Err(Error::Config(_))));
    }

    #[test]
    fn graded_mesh_matches_inside_inner_radius() {
        let small = generate_disk_annulus(0.5, 1.0, 2.0, 6, 24).unwrap();
        let big = generate_graded_disk(0.5, 1.0, 2.0, 6.0, 6, 24).unwrap();
        let inside = |m: &Mesh| -> Vec<[f64; 2]> {
            m.vertices().iter().copied().filter(|v| v[0].hypot(v[1]) <= 1.0 + 1e-12).collect()
        };
        assert_eq!(inside(&small), inside(&big));
        let r_max = big.vertices().iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
        assert!((r_max - 6.0).abs() < 1e-12);
        assert!(big.min_angle_degrees() >= 20.0, "{}", big.min_angle_degrees());
    }
}

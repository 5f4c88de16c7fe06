//! Marching cubes over `[−1, 1]³` and triangle-mesh analysis.

use std::collections::HashMap;

use nalgebra::Vector3;
use rayon::prelude::*;

use super::tables::{CORNER_OFFSETS, EDGE_CORNERS, EDGE_TABLE, TRI_TABLE};
use super::{deformation_margin, grid_coordinate, ScalarField, BOUNDARY_TOL};
use crate::error::{Error, Result};

/// Triangle mesh in `c`-space with per-triangle component labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IsoMesh {
    vertices: Vec<Vector3<f64>>,
    triangles: Vec<[usize; 3]>,
    component_id: Vec<usize>,
}

impl IsoMesh {
    /// Validates indices and labels components.
    pub fn from_parts(vertices: Vec<Vector3<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if let Some(t) = triangles.iter().find(|t| t.iter().any(|&i| i >= vertices.len())) {
            return Err(Error::InvalidInput(format!(
                "triangle {t:?} references a vertex beyond {}",
                vertices.len()
            )));
        }
        let component_id = label_components(vertices.len(), &triangles);
        Ok(Self { vertices, triangles, component_id })
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Component label of each triangle, numbered by first appearance.
    pub fn component_id(&self) -> &[usize] {
        &self.component_id
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Largest distance from a mirrored vertex to the nearest original
    /// vertex, mirroring through the plane `c_axis = 0` (axis 0, 1 or 2).
    pub fn reflection_mismatch(&self, axis: usize) -> f64 {
        let cell = 0.05;
        let key = |v: &Vector3<f64>| [v.x, v.y, v.z].map(|x| (x / cell).floor() as i64);
        let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            buckets.entry(key(v)).or_default().push(i);
        }
        let mut worst: f64 = 0.0;
        for v in &self.vertices {
            let mut m = *v;
            m[axis] = -m[axis];
            let [a, b, c] = key(&m);
            let mut best = f64::INFINITY;
            for da in -1..=1 {
                for db in -1..=1 {
                    for dc in -1..=1 {
                        if let Some(ids) = buckets.get(&[a + da, b + db, c + dc]) {
                            for &i in ids {
                                best = best.min((self.vertices[i] - m).norm());
                            }
                        }
                    }
                }
            }
            worst = worst.max(best);
        }
        worst
    }
}

/// Number of triangle-adjacency components.
pub fn connected_components(mesh: &IsoMesh) -> usize {
    mesh.component_id.iter().max().map_or(0, |m| m + 1)
}

fn label_components(n_vertices: usize, triangles: &[[usize; 3]]) -> Vec<usize> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..n_vertices).collect();
    for t in triangles {
        for k in 1..3 {
            let (a, b) = (find(&mut parent, t[0]), find(&mut parent, t[k]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut labels = HashMap::new();
    triangles
        .iter()
        .map(|t| {
            let root = find(&mut parent, t[0]);
            let next = labels.len();
            *labels.entry(root).or_insert(next)
        })
        .collect()
}

/// Field samples on an `n³` grid; index `i + n (j + n k)` with `i` along c1.
struct Grid {
    n: usize,
    values: Vec<f64>,
}

impl Grid {
    fn sample(n: usize, f: impl Fn([f64; 3]) -> f64 + Sync) -> Self {
        let values = (0..n)
            .into_par_iter()
            .flat_map_iter(|k| {
                let f = &f;
                (0..n * n).map(move |ij| {
                    f([grid_coordinate(ij % n, n), grid_coordinate(ij / n, n), grid_coordinate(k, n)])
                })
            })
            .collect();
        Self { n, values }
    }

    fn point(&self, idx: usize) -> [usize; 3] {
        [idx % self.n, (idx / self.n) % self.n, idx / (self.n * self.n)]
    }

    fn index(&self, [i, j, k]: [usize; 3]) -> usize {
        i + self.n * (j + self.n * k)
    }

    /// Position of the level crossing on the edge starting at grid point
    /// `p` along `axis`.
    fn edge_vertex(&self, key: u64, level: f64) -> Vector3<f64> {
        let (p, axis) = ((key / 3) as usize, (key % 3) as usize);
        let lo = self.point(p);
        let mut hi = lo;
        hi[axis] += 1;
        let (va, vb) = (self.values[p], self.values[self.index(hi)]);
        let t = if vb == va { 0.5 } else { ((level - va) / (vb - va)).clamp(0.0, 1.0) };
        let mut pos = lo.map(|x| grid_coordinate(x, self.n));
        let (a, b) = (pos[axis], grid_coordinate(hi[axis], self.n));
        pos[axis] = a + t * (b - a);
        Vector3::from(pos)
    }
}

/// Marching cubes on `grid`; cells with a false `keep` entry or a NaN corner
/// are skipped. Triangles come out in cell order.
fn extract(grid: &Grid, level: f64, keep: Option<&[bool]>) -> IsoMesh {
    let n = grid.n;
    let cells = n - 1;
    let slabs: Vec<Vec<[u64; 3]>> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::new();
            for j in 0..cells {
                for i in 0..cells {
                    if keep.is_some_and(|keep| !keep[i + cells * (j + cells * k)]) {
                        continue;
                    }
                    let corners = CORNER_OFFSETS.map(|[di, dj, dk]| grid.index([i + di, j + dj, k + dk]));
                    let values = corners.map(|c| grid.values[c]);
                    if values.iter().any(|v| v.is_nan()) {
                        continue;
                    }
                    let case = values
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (b, &v)| if v < level { acc | 1 << b } else { acc });
                    if EDGE_TABLE[case] == 0 {
                        continue;
                    }
                    let edge_key = |e: i8| -> u64 {
                        let [a, b] = EDGE_CORNERS[e as usize];
                        let (lo, hi) = (corners[a].min(corners[b]), corners[a].max(corners[b]));
                        let axis = match hi - lo {
                            1 => 0,
                            d if d == n => 1,
                            _ => 2,
                        };
                        lo as u64 * 3 + axis
                    };
                    for tri in TRI_TABLE[case].chunks(3).take_while(|t| t[0] >= 0) {
                        out.push([edge_key(tri[0]), edge_key(tri[1]), edge_key(tri[2])]);
                    }
                }
            }
            out
        })
        .collect();

    let mut by_key: HashMap<u64, usize> = HashMap::new();
    let mut by_position: HashMap<[u64; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for tri in slabs.iter().flatten() {
        let idx = tri.map(|key| {
            *by_key.entry(key).or_insert_with(|| {
                let pos = grid.edge_vertex(key, level);
                let bits = [pos.x, pos.y, pos.z].map(|x| (x + 0.0).to_bits());
                *by_position.entry(bits).or_insert_with(|| {
                    vertices.push(pos);
                    vertices.len() - 1
                })
            })
        });
        if idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2] {
            triangles.push(idx);
        }
    }
    let component_id = label_components(vertices.len(), &triangles);
    IsoMesh { vertices, triangles, component_id }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 33 || resolution.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("resolution must be odd and at least 33, got {resolution}")));
    }
    Ok(())
}

/// Per-cell mask keeping cells with at least one physical corner.
fn physical_cells(field: &ScalarField, n: usize) -> Vec<bool> {
    let inside = Grid::sample(n, |c| if field.physical_margin(c) >= -BOUNDARY_TOL { 1.0 } else { 0.0 });
    let cells = n - 1;
    (0..cells * cells * cells)
        .map(|cell| {
            let [i, j, k] = [cell % cells, (cell / cells) % cells, cell / (cells * cells)];
            CORNER_OFFSETS.iter().any(|[di, dj, dk]| inside.values[inside.index([i + di, j + dj, k + dk])] > 0.0)
        })
        .collect()
}

/// Level surface `field = level` by marching cubes on a `resolution³` grid
/// over `[−1, 1]³`. With `clip`, cells entirely outside the physical region
/// are dropped, leaving open cut ends. Level 0 gives an empty mesh.
pub fn iso_surface(field: &ScalarField, level: f64, resolution: usize, clip: bool) -> Result<IsoMesh> {
    check_resolution(resolution)?;
    if !level.is_finite() || level < 0.0 {
        return Err(Error::InvalidInput(format!("iso-level must be non-negative, got {level}")));
    }
    if let ScalarField::GeometricDiscordDeformed { r, s } = field {
        check_bloch_component(*r, *s)?;
    }
    if level == 0.0 {
        return Ok(IsoMesh::default());
    }
    let grid = Grid::sample(resolution, |c| field.value(c));
    let mask = clip.then(|| physical_cells(field, resolution));
    Ok(extract(&grid, level, mask.as_deref()))
}

fn check_bloch_component(r: f64, s: f64) -> Result<()> {
    if r.abs() < 1.0 && s.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("Bloch components must satisfy |r|, |s| < 1, got r = {r}, s = {s}")))
    }
}

/// Zero set of `min(μ−, ν−)`: the boundary of the deformed physical region.
pub fn deformation_boundary(r: f64, s: f64, resolution: usize) -> Result<IsoMesh> {
    check_resolution(resolution)?;
    check_bloch_component(r, s)?;
    let grid = Grid::sample(resolution, |c| deformation_margin(r, s, c));
    Ok(extract(&grid, 0.0, None))
}

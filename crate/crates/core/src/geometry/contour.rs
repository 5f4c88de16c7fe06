//! Marching squares on planes `c3 = const`.

use std::collections::{BTreeMap, HashMap};

use super::{grid_coordinate, in_tetrahedron, ScalarField};
use crate::error::{Error, Result};

/// Grid values within this distance above the level count as below it, so
/// that level sets along which the field only touches the level (such as
/// the axis rays of a frozen geometric discord) are still traced.
const TANGENT_TOL: f64 = 1e-12;
const BISECTION_STEPS: usize = 60;

/// Level-set polylines of a field restricted to a plane `c3 = plane_c3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub plane_c3: f64,
    pub level: f64,
    /// Points `(c1, c2)`; closed loops repeat their first point at the end.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

impl ContourSet {
    pub fn points(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.polylines.iter().flatten().map(|p| [p[0], p[1], self.plane_c3])
    }
}

/// Segments of each marching-squares case as pairs of cell edges. Edge 0
/// joins corners 0–1 (bottom), 1 joins 1–2, 2 joins 2–3, 3 joins 3–0.
/// Saddle cases 5 and 10 are resolved separately.
const SEGMENTS: [&[[usize; 2]]; 16] = [
    &[],
    &[[3, 0]],
    &[[0, 1]],
    &[[3, 1]],
    &[[1, 2]],
    &[],
    &[[0, 2]],
    &[[3, 2]],
    &[[2, 3]],
    &[[0, 2]],
    &[],
    &[[1, 2]],
    &[[1, 3]],
    &[[0, 1]],
    &[[3, 0]],
    &[],
];

/// Contour of `field = level` on the plane `c3 = plane_c3`, traced on a
/// `resolution²` grid over `[−1, 1]²`. Crossing points are refined by
/// bisection on the field itself. Level 0 gives no polylines.
pub fn contour_slice(field: &ScalarField, level: f64, plane_c3: f64, resolution: usize) -> Result<ContourSet> {
    if plane_c3.is_nan() || plane_c3.abs() > 1.0 {
        return Err(Error::InvalidInput(format!("plane c3 = {plane_c3} outside [-1, 1]")));
    }
    if !level.is_finite() || level < 0.0 {
        return Err(Error::InvalidInput(format!("contour level must be non-negative, got {level}")));
    }
    if resolution < 3 || resolution.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("resolution must be odd and at least 3, got {resolution}")));
    }
    let mut contours = ContourSet { plane_c3, level, polylines: Vec::new() };
    if level == 0.0 {
        return Ok(contours);
    }

    let n = resolution;
    let at = |x: f64, y: f64| field.value([x, y, plane_c3]);
    let below = |v: f64| v <= level + TANGENT_TOL;
    let values: Vec<f64> = (0..n * n).map(|p| at(grid_coordinate(p % n, n), grid_coordinate(p / n, n))).collect();

    // Edge keys: 2 p for the edge from point p along c1, 2 p + 1 along c2.
    let mut segments: Vec<[usize; 2]> = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let p = i + n * j;
            let corners = [p, p + 1, p + 1 + n, p + n];
            let v = corners.map(|c| values[c]);
            if v.iter().any(|x| x.is_nan()) {
                continue;
            }
            let case = (0..4).fold(0, |acc, b| if below(v[b]) { acc | 1 << b } else { acc });
            let edge_key = |e: usize| match e {
                0 => 2 * p,
                1 => 2 * (p + 1) + 1,
                2 => 2 * (p + n),
                _ => 2 * p + 1,
            };
            let pairs: &[[usize; 2]] = match case {
                5 | 10 => {
                    let center =
                        at((grid_coordinate(i, n) + grid_coordinate(i + 1, n)) / 2.0, (grid_coordinate(j, n) + grid_coordinate(j + 1, n)) / 2.0);
                    // Cut off corners 1 and 3 when the center sides with 0 and 2.
                    let cut_odd = below(center) == (case == 5);
                    if cut_odd {
                        &[[0, 1], [2, 3]]
                    } else {
                        &[[3, 0], [1, 2]]
                    }
                }
                _ => SEGMENTS[case],
            };
            segments.extend(pairs.iter().map(|&[a, b]| [edge_key(a), edge_key(b)]));
        }
    }

    let mut crossing: HashMap<usize, [f64; 2]> = HashMap::new();
    for &key in segments.iter().flatten() {
        crossing.entry(key).or_insert_with(|| {
            let p = key / 2;
            let q = if key % 2 == 0 { p + 1 } else { p + n };
            let (mut a, mut b) = (point(p, n), point(q, n));
            if !below(values[key / 2]) {
                std::mem::swap(&mut a, &mut b);
            }
            for _ in 0..BISECTION_STEPS {
                let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                if below(at(m[0], m[1])) {
                    a = m;
                } else {
                    b = m;
                }
            }
            [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
        });
    }

    contours.polylines = chain(&segments).into_iter().map(|keys| dedup_points(&keys, &crossing)).collect();
    contours.polylines.retain(|l| l.len() >= 2);
    Ok(contours)
}

fn point(p: usize, n: usize) -> [f64; 2] {
    [grid_coordinate(p % n, n), grid_coordinate(p / n, n)]
}

fn dedup_points(keys: &[usize], crossing: &HashMap<usize, [f64; 2]>) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(keys.len());
    for k in keys {
        let pt = crossing[k];
        if out.last() != Some(&pt) {
            out.push(pt);
        }
    }
    out
}

/// Joins segments sharing edge keys into polylines: open chains first,
/// starting from their smallest free end, then closed loops.
fn chain(segments: &[[usize; 2]]) -> Vec<Vec<usize>> {
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for &k in seg {
            incident.entry(k).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let walk = |start_key: usize, first: usize, used: &mut Vec<bool>| {
        let mut line = vec![start_key];
        let (mut key, mut seg) = (start_key, Some(first));
        while let Some(s) = seg {
            used[s] = true;
            let [a, b] = segments[s];
            key = if a == key { b } else { a };
            line.push(key);
            seg = incident[&key].iter().copied().find(|&t| !used[t]);
        }
        line
    };
    let ends: Vec<usize> = incident.iter().filter(|(_, segs)| segs.len() == 1).map(|(&k, _)| k).collect();
    for k in ends {
        let s = incident[&k][0];
        if !used[s] {
            lines.push(walk(k, s, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            lines.push(walk(segments[s][0], s, &mut used));
        }
    }
    lines
}

/// Outcome of comparing the `2 D_G = α²` and `D = α` contours on a plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainmentReport {
    pub holds: bool,
    /// Physical points checked on the `2 D_G = α²` contour.
    pub geometric_points: usize,
    /// Largest `D − α` found on the `2 D_G = α²` contour.
    pub worst_discord_excess: f64,
    /// Physical points checked on the `D = α` contour.
    pub discord_points: usize,
    /// Largest `α² − 2 D_G` found on the `D = α` contour.
    pub worst_geometric_deficit: f64,
    pub tolerance: f64,
}

/// Checks that the region `2 D_G ≤ α²` lies inside `D ≤ α` on the plane
/// `c3 = plane_c3`: `D ≤ α + ε` on the first contour and `2 D_G ≥ α² − ε`
/// on the second. Contour points outside T are ignored.
pub fn contour_containment(alpha: f64, plane_c3: f64, resolution: usize) -> Result<ContainmentReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let tolerance = 1e-9;
    let dg = ScalarField::GeometricDiscord;
    let d = ScalarField::Discord;

    let mut geometric_points = 0;
    let mut worst_discord_excess = f64::NEG_INFINITY;
    for c in contour_slice(&dg, alpha * alpha / 2.0, plane_c3, resolution)?.points() {
        if in_tetrahedron(c) {
            geometric_points += 1;
            worst_discord_excess = worst_discord_excess.max(d.value(c) - alpha);
        }
    }
    let mut discord_points = 0;
    let mut worst_geometric_deficit = f64::NEG_INFINITY;
    for c in contour_slice(&d, alpha, plane_c3, resolution)?.points() {
        if in_tetrahedron(c) {
            discord_points += 1;
            worst_geometric_deficit = worst_geometric_deficit.max(alpha * alpha - 2.0 * dg.value(c));
        }
    }
    Ok(ContainmentReport {
        holds: worst_discord_excess <= tolerance && worst_geometric_deficit <= tolerance,
        geometric_points,
        worst_discord_excess,
        discord_points,
        worst_geometric_deficit,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_level_traces_axis_rays_and_circle() {
        let set = contour_slice(&ScalarField::GeometricDiscord, 0.0225, 0.3, 201).unwrap();
        assert!(!set.polylines.is_empty());
        let mut on_ray = 0;
        for [c1, c2] in set.polylines.iter().flatten().copied() {
            let r = (c1 * c1 + c2 * c2).sqrt();
            let ray = (c1.abs() >= 0.3 - 1e-9 && c2.abs() < 1e-5) || (c2.abs() >= 0.3 - 1e-9 && c1.abs() < 1e-5);
            assert!(ray || (r - 0.3).abs() < 1e-9, "({c1}, {c2})");
            if c1 > 0.5 && c2.abs() < 1e-5 {
                on_ray += 1;
            }
        }
        assert!(on_ray > 10);
    }

    #[test]
    fn circle_contour_is_one_closed_loop() {
        // Below |c1|, |c2| < c3 the geometric discord is (c1² + c2²)/4.
        let set = contour_slice(&ScalarField::GeometricDiscord, 0.01, 0.5, 101).unwrap();
        assert_eq!(set.polylines.len(), 1);
        let line = &set.polylines[0];
        assert_eq!(line.first(), line.last());
        for [c1, c2] in line {
            assert!(((c1 * c1 + c2 * c2).sqrt() - 0.2).abs() < 1e-10);
        }
    }

    #[test]
    fn level_zero_and_bad_inputs() {
        let f = ScalarField::Discord;
        assert!(contour_slice(&f, 0.0, 0.0, 101).unwrap().polylines.is_empty());
        assert!(contour_slice(&f, 0.1, 1.5, 101).is_err());
        assert!(contour_slice(&f, 0.1, 0.0, 100).is_err());
        assert!(contour_containment(0.0, 0.0, 101).is_err());
        assert!(contour_containment(1.0, 0.0, 101).is_err());
    }

    #[test]
    fn containment_examples() {
        let report = contour_containment(0.15, 0.3, 101).unwrap();
        assert!(report.holds, "{report:?}");
        assert!(report.geometric_points > 0 && report.discord_points > 0, "{report:?}");
        // On c3 = 0 the level 2 D_G = 0.25 needs |c1|, |c2| ≥ 1/√2, outside T.
        let report = contour_containment(0.5, 0.0, 101).unwrap();
        assert!(report.holds && report.geometric_points == 0, "{report:?}");
    }

    #[test]
    fn chaining_handles_open_and_closed() {
        let lines = chain(&[[1, 2], [5, 6], [2, 3], [6, 7], [7, 5]]);
        assert_eq!(lines, vec![vec![1, 2, 3], vec![5, 6, 7, 5]]);
    }
}

//! One-pixel skeletons of ink rasters and their decomposition into polylines.

use crate::raster::Raster;

/// 8-neighbourhood offsets, clockwise from north (y grows downwards).
const RING: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

fn ring(img: &Raster, x: usize, y: usize) -> [bool; 8] {
    let mut n = [false; 8];
    for (k, (dx, dy)) in RING.iter().enumerate() {
        n[k] = img.get_signed(x as isize + dx, y as isize + dy);
    }
    n
}

fn degree(img: &Raster, x: usize, y: usize) -> usize {
    ring(img, x, y).iter().filter(|&&v| v).count()
}

/// Zhang-Suen thinning followed by removal of staircase corners, so that
/// interior skeleton pixels have exactly two neighbours.
pub fn skeletonize(img: &Raster) -> Raster {
    let mut sk = img.clone();
    let (w, h) = (sk.width(), sk.height());
    let mut doomed = Vec::new();
    loop {
        let mut changed = false;
        for step in 0..2 {
            doomed.clear();
            for y in 0..h {
                for x in 0..w {
                    if !sk.get(x, y) {
                        continue;
                    }
                    let n = ring(&sk, x, y);
                    let b = n.iter().filter(|&&v| v).count();
                    if !(2..=6).contains(&b) {
                        continue;
                    }
                    let a = (0..8).filter(|&k| !n[k] && n[(k + 1) % 8]).count();
                    if a != 1 {
                        continue;
                    }
                    // Indices: 0 N, 2 E, 4 S, 6 W.
                    let ok = if step == 0 {
                        !(n[0] && n[2] && n[4]) && !(n[2] && n[4] && n[6])
                    } else {
                        !(n[0] && n[2] && n[6]) && !(n[0] && n[4] && n[6])
                    };
                    if ok {
                        doomed.push((x, y));
                    }
                }
            }
            changed |= !doomed.is_empty();
            for &(x, y) in &doomed {
                sk.set(x, y, false);
            }
        }
        if !changed {
            break;
        }
    }

    // A pixel whose neighbours stay 8-connected without it is redundant.
    for y in 0..h {
        for x in 0..w {
            if sk.get(x, y) && degree(&sk, x, y) >= 2 && ring_connected(&ring(&sk, x, y)) {
                sk.set(x, y, false);
            }
        }
    }
    sk
}

/// Whether the inked cells of a 3×3 ring form one 8-connected group.
fn ring_connected(n: &[bool; 8]) -> bool {
    let cells: Vec<(isize, isize)> = (0..8).filter(|&k| n[k]).map(|k| RING[k]).collect();
    if cells.is_empty() {
        return false;
    }
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..cells.len() {
            if !seen[j]
                && (cells[i].0 - cells[j].0).abs() <= 1
                && (cells[i].1 - cells[j].1).abs() <= 1
            {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// A traced skeleton branch, in pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(usize, usize)>,
    /// Skeleton degree at the first and last pixel; cycles report `(2, 2)`.
    pub end_degrees: (usize, usize),
}

impl Polyline {
    /// Length in pixels along the chain.
    pub fn length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                let dx = w[1].0 as f64 - w[0].0 as f64;
                let dy = w[1].1 as f64 - w[0].1 as f64;
                dx.hypot(dy)
            })
            .sum()
    }

    pub fn is_spur(&self) -> bool {
        let (a, b) = self.end_degrees;
        (a == 1 && b >= 3) || (b == 1 && a >= 3)
    }
}

/// Splits a skeleton into chains running between nodes (pixels whose degree
/// is not 2), plus closed loops that contain no node at all.
pub fn trace_polylines(sk: &Raster) -> Vec<Polyline> {
    let (w, h) = (sk.width(), sk.height());
    let idx = |x: usize, y: usize| y * w + x;
    let neighbours = |x: usize, y: usize| {
        RING.iter().filter_map(move |(dx, dy)| {
            let (nx, ny) = (x as isize + dx, y as isize + dy);
            sk.get_signed(nx, ny).then_some((nx as usize, ny as usize))
        })
    };
    let is_node = |x: usize, y: usize| degree(sk, x, y) != 2;
    let mut visited = vec![false; w * h];
    let mut out = Vec::new();

    let walk = |start: (usize, usize),
                first: (usize, usize),
                visited: &mut Vec<bool>|
     -> Vec<(usize, usize)> {
        let mut pts = vec![start, first];
        let (mut prev, mut cur) = (start, first);
        while !is_node(cur.0, cur.1) {
            visited[idx(cur.0, cur.1)] = true;
            let next = neighbours(cur.0, cur.1).filter(|&p| p != prev).find(|&p| {
                p == start || is_node(p.0, p.1) || !visited[idx(p.0, p.1)]
            });
            match next {
                Some(p) => {
                    pts.push(p);
                    prev = cur;
                    cur = p;
                    if p == start {
                        break;
                    }
                }
                None => break,
            }
        }
        pts
    };

    for y in 0..h {
        for x in 0..w {
            if !sk.get(x, y) || !is_node(x, y) {
                continue;
            }
            let d = degree(sk, x, y);
            if d == 0 {
                out.push(Polyline {
                    points: vec![(x, y)],
                    end_degrees: (0, 0),
                });
                continue;
            }
            for n in neighbours(x, y).collect::<Vec<_>>() {
                if is_node(n.0, n.1) {
                    // Node-to-node step: record once.
                    if idx(n.0, n.1) > idx(x, y) {
                        out.push(Polyline {
                            points: vec![(x, y), n],
                            end_degrees: (d, degree(sk, n.0, n.1)),
                        });
                    }
                    continue;
                }
                if visited[idx(n.0, n.1)] {
                    continue;
                }
                let pts = walk((x, y), n, &mut visited);
                let last = *pts.last().unwrap();
                out.push(Polyline {
                    end_degrees: (d, degree(sk, last.0, last.1)),
                    points: pts,
                });
            }
        }
    }

    // Remaining unvisited pixels lie on node-free loops.
    for y in 0..h {
        for x in 0..w {
            if !sk.get(x, y) || visited[idx(x, y)] || is_node(x, y) {
                continue;
            }
            visited[idx(x, y)] = true;
            let first = neighbours(x, y).next().unwrap();
            let mut pts = walk((x, y), first, &mut visited);
            if pts.last() != Some(&(x, y)) {
                pts.push((x, y));
            }
            out.push(Polyline {
                points: pts,
                end_degrees: (2, 2),
            });
        }
    }
    out
}

/// Removes end branches shorter than `min_len` pixels until none remain, so
/// thinning artefacts do not split the chains they hang from.
pub fn prune_spurs(sk: &mut Raster, min_len: f64) {
    for _ in 0..64 {
        let mut changed = false;
        for p in trace_polylines(sk) {
            if p.is_spur() && p.length() < min_len {
                let keep_first = p.end_degrees.0 >= 3;
                let n = p.points.len();
                for (i, &(x, y)) in p.points.iter().enumerate() {
                    let junction = if keep_first { i == 0 } else { i == n - 1 };
                    if !junction {
                        sk.set(x, y, false);
                    }
                }
                changed = true;
                // Degrees changed; retrace before touching another branch.
                break;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Turning angle in degrees at each point of `pts` that has `w` neighbours on
/// both sides, measured between the chords to those neighbours.
pub fn turning_angles(pts: &[(usize, usize)], w: usize) -> Vec<f64> {
    if w == 0 || pts.len() < 2 * w + 1 {
        return Vec::new();
    }
    (w..pts.len() - w)
        .map(|i| {
            let a = (pts[i].0 as f64 - pts[i - w].0 as f64, pts[i].1 as f64 - pts[i - w].1 as f64);
            let b = (pts[i + w].0 as f64 - pts[i].0 as f64, pts[i + w].1 as f64 - pts[i].1 as f64);
            let cross = a.0 * b.1 - a.1 * b.0;
            let dot = a.0 * b.0 + a.1 * b.1;
            cross.abs().atan2(dot).to_degrees()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thick_line(len: usize, width: usize) -> Raster {
        Raster::from_fn(len + 10, width + 10, 10.0, |x, y| {
            (5..5 + len).contains(&x) && (5..5 + width).contains(&y)
        })
    }

    #[test]
    fn thick_bar_thins_to_single_chain() {
        let mut sk = skeletonize(&thick_line(60, 5));
        prune_spurs(&mut sk, 5.0);
        let polys = trace_polylines(&sk);
        assert_eq!(polys.len(), 1, "{polys:?}");
        assert!(polys[0].length() > 45.0);
        for p in &polys[0].points[1..polys[0].points.len() - 1] {
            assert_eq!(degree(&sk, p.0, p.1), 2);
        }
    }

    #[test]
    fn ring_is_a_single_loop() {
        let img = Raster::from_fn(60, 60, 10.0, |x, y| {
            let r = ((x as f64 - 30.0).powi(2) + (y as f64 - 30.0).powi(2)).sqrt();
            (15.0..19.0).contains(&r)
        });
        let polys = trace_polylines(&skeletonize(&img));
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].end_degrees, (2, 2));
        assert_eq!(polys[0].points.first(), polys[0].points.last());
    }

    #[test]
    fn staircase_corners_removed() {
        // A diagonal drawn with 4-connected steps.
        let img = Raster::from_fn(20, 20, 10.0, |x, y| x == y || x == y + 1);
        let sk = skeletonize(&img);
        let polys = trace_polylines(&sk);
        assert_eq!(polys.len(), 1);
        assert!(polys[0].points.len() <= 20);
    }

    #[test]
    fn turning_angle_of_corner() {
        let mut pts: Vec<_> = (0..10).map(|x| (x, 0)).collect();
        pts.extend((1..10).map(|y| (9, y)));
        let a = turning_angles(&pts, 3);
        let max = a.iter().copied().fold(0.0, f64::max);
        assert!((max - 90.0).abs() < 1e-9);
        assert_eq!(a[0], 0.0);
    }
}

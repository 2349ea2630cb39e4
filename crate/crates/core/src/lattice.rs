//! Two-dimensional lattices, their duals and ball enumeration.

use crate::error::{Error, Result};

pub type Vec2 = [f64; 2];

/// Bases with |det| below this are treated as singular.
const DET_THRESHOLD: f64 = 1e-12;

/// Default limit on the number of points a single ball enumeration may hold.
pub const DEFAULT_POINT_CAP: u64 = 50_000_000;

/// Relative tolerance for deciding that two vector norms coincide.
const NORM_TOL: f64 = 1e-9;

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: Vec2) -> f64 {
    dot(a, a).sqrt()
}

fn combine(c0: f64, b0: Vec2, c1: f64, b1: Vec2) -> Vec2 {
    [c0 * b0[0] + c1 * b1[0], c0 * b0[1] + c1 * b1[1]]
}

/// A lattice M Z^2 in the plane.
///
/// `basis[j]` is the j-th generator, i.e. the j-th column of M. The dual
/// lattice is generated by the columns of M^{-T}.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice2 {
    pub basis: [Vec2; 2],
    pub covolume: f64,
    pub dual_basis: [Vec2; 2],
    pub min_dist: f64,
    pub dual_min_dist: f64,
    pub kissing_count: usize,
}

/// Lagrange-Gauss reduction; the first returned vector is a shortest
/// nonzero lattice vector.
fn gauss_reduce(mut u: Vec2, mut v: Vec2) -> (Vec2, Vec2) {
    if dot(u, u) > dot(v, v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let m = (dot(u, v) / dot(u, u)).round();
        v = combine(1.0, v, -m, u);
        if dot(v, v) >= dot(u, u) {
            return (u, v);
        }
        std::mem::swap(&mut u, &mut v);
    }
}

/// Shortest norm and the number of vectors attaining it. For a reduced
/// basis every minimal vector is a {-1, 0, 1} combination.
fn minimal_vectors(b0: Vec2, b1: Vec2) -> (f64, usize) {
    let (u, v) = gauss_reduce(b0, b1);
    let mut norms = Vec::with_capacity(8);
    for i in -1..=1 {
        for j in -1..=1 {
            if i != 0 || j != 0 {
                norms.push(norm(combine(i as f64, u, j as f64, v)));
            }
        }
    }
    let shortest = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let count = norms
        .iter()
        .filter(|&&n| n <= shortest * (1.0 + NORM_TOL))
        .count();
    (shortest, count)
}

/// Builds a lattice from its generators (the columns of M).
pub fn make_lattice(basis: [Vec2; 2]) -> Result<Lattice2> {
    let [a, b] = basis;
    let det = a[0] * b[1] - a[1] * b[0];
    if !(det.abs() >= DET_THRESHOLD) {
        return Err(Error::SingularBasis { det: det.abs() });
    }
    // columns of M^{-T}: rows of M^{-1}
    let dual_basis = [[b[1] / det, -b[0] / det], [-a[1] / det, a[0] / det]];
    let (min_dist, _) = minimal_vectors(a, b);
    let (dual_min_dist, kissing_count) = minimal_vectors(dual_basis[0], dual_basis[1]);
    Ok(Lattice2 {
        basis,
        covolume: det.abs(),
        dual_basis,
        min_dist,
        dual_min_dist,
        kissing_count,
    })
}

impl Lattice2 {
    /// The integer lattice Z^2.
    pub fn square() -> Self {
        make_lattice([[1.0, 0.0], [0.0, 1.0]]).expect("identity basis")
    }

    /// The reciprocal lattice as a `Lattice2` in its own right.
    pub fn dual(&self) -> Self {
        make_lattice(self.dual_basis).expect("dual of a regular basis is regular")
    }

    pub fn point(&self, m: [i64; 2]) -> Vec2 {
        combine(m[0] as f64, self.basis[0], m[1] as f64, self.basis[1])
    }

    /// Integer coordinate bounds of the ball of the given radius.
    fn coordinate_bounds(&self, radius: f64) -> [i64; 2] {
        // m_i = <dual_i, z>, so |m_i| <= radius |dual_i|
        [0, 1].map(|i| (radius * norm(self.dual_basis[i]) + 1e-9).floor() as i64)
    }

    /// Iterates over {m in Z^2 : |M m| <= radius} in lexicographic order of m,
    /// yielding the integer coordinates together with the point.
    pub fn ball(&self, radius: f64) -> BallIter<'_> {
        let bounds = self.coordinate_bounds(radius);
        BallIter {
            lattice: self,
            radius_sq: radius * radius,
            bounds,
            next: [-bounds[0], -bounds[1]],
        }
    }

    /// Largest distance from the center of a reduced fundamental
    /// parallelogram to its corners. Translates of that parallelogram tile
    /// the plane, one per lattice point.
    pub fn cell_radius(&self) -> f64 {
        let (u, v) = gauss_reduce(self.basis[0], self.basis[1]);
        let plus = norm(combine(1.0, u, 1.0, v));
        let minus = norm(combine(1.0, u, -1.0, v));
        0.5 * plus.max(minus)
    }

    /// Rough count of points in a ball, used for the enumeration cap.
    pub fn ball_count_estimate(&self, radius: f64) -> u64 {
        let area = std::f64::consts::PI * radius * radius / self.covolume;
        let boundary = 2.0 * std::f64::consts::PI * radius / self.min_dist;
        (area + boundary + 1.0).ceil() as u64
    }
}

pub struct BallIter<'a> {
    lattice: &'a Lattice2,
    radius_sq: f64,
    bounds: [i64; 2],
    next: [i64; 2],
}

impl Iterator for BallIter<'_> {
    type Item = ([i64; 2], Vec2);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.next[0] > self.bounds[0] {
                return None;
            }
            let m = self.next;
            self.next[1] += 1;
            if self.next[1] > self.bounds[1] {
                self.next[1] = -self.bounds[1];
                self.next[0] += 1;
            }
            let z = self.lattice.point(m);
            if dot(z, z) <= self.radius_sq * (1.0 + 1e-14) {
                return Some((m, z));
            }
        }
    }
}

/// All lattice points with |z| <= radius, origin included, in
/// lexicographic order of their integer coordinates.
pub fn enumerate_ball(lat: &Lattice2, radius: f64) -> Result<Vec<Vec2>> {
    enumerate_ball_capped(lat, radius, DEFAULT_POINT_CAP)
}

pub fn enumerate_ball_capped(lat: &Lattice2, radius: f64, cap: u64) -> Result<Vec<Vec2>> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    let estimate = lat.ball_count_estimate(radius);
    if estimate > cap {
        return Err(Error::BallTooLarge {
            radius,
            estimate,
            cap,
        });
    }
    Ok(lat.ball(radius).map(|(_, z)| z).collect())
}

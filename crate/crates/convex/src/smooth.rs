use std::f64::consts::PI;

use crate::domain::{ConvexDomain, DomainKind};
use crate::geom::{self, P2};
use crate::{ConvexError, Result};

/// `Ω_n ⊂ Ω`: the polygon inscribed through `2^{n+4}` angular boundary
/// samples (and the vertices of a polygonal `Ω`), opened by a disc of radius
/// `2^{-n-2}` times the inradius of `Ω`. The boundary is a union of
/// segments and circular arcs, hence `C^1`.
pub fn smooth_approximation(domain: &ConvexDomain, n: u32) -> Result<ConvexDomain> {
    if n < 2 {
        return Err(ConvexError::SmoothingLevel(n));
    }
    let mut pts: Vec<P2> = match domain.kind() {
        DomainKind::Disc { .. } => Vec::new(),
        DomainKind::Polygon { vertices } => vertices.clone(),
        DomainKind::Rounded { .. } => return Err(ConvexError::SmoothingInput),
    };
    let k = 1usize << (n + 4);
    pts.extend((0..k).map(|j| domain.boundary_point(2.0 * PI * j as f64 / k as f64).position));
    let hull = geom::convex_hull(&pts);
    let r = 2f64.powi(-(n as i32) - 2) * domain.inradius();
    let m = hull.len();
    let mut core = hull.clone();
    for i in 0..m {
        let d = geom::sub(hull[(i + 1) % m], hull[i]);
        let normal = geom::unit([d[1], -d[0]]);
        core = geom::clip_halfplane(&core, normal, geom::dot(normal, hull[i]) - r);
    }
    let core = geom::convex_hull(&core);
    ConvexDomain::rounded(core, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn directions(count: usize) -> Vec<P2> {
        (0..count).map(|i| geom::polar(2.0 * PI * (i as f64 + 0.37) / count as f64)).collect()
    }

    #[test]
    fn disc_gap_and_nesting() {
        let d = ConvexDomain::disc(1.0).unwrap();
        let a = smooth_approximation(&d, 8).unwrap();
        let b = smooth_approximation(&d, 9).unwrap();
        for v in directions(1000) {
            let (r, ra, rb) = (d.rho(v), a.rho(v), b.rho(v));
            assert!(r <= rb * (1.0 + 1e-12) && rb <= ra * (1.0 + 1e-12));
            assert!(ra - r <= 2f64.powi(-9) * r);
        }
    }

    #[test]
    fn polygon_keeps_its_edges() {
        let sq = ConvexDomain::square(1.0).unwrap();
        let a = smooth_approximation(&sq, 6).unwrap();
        for v in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.3], [0.2, -1.0]] {
            assert!((a.rho(v) - sq.rho(v)).abs() < 1e-12);
        }
        for v in directions(1000) {
            assert!(a.rho(v) - sq.rho(v) <= 2f64.powi(-7) * sq.rho(v));
        }
    }

    #[test]
    fn level_must_be_at_least_two() {
        assert!(smooth_approximation(&ConvexDomain::disc(1.0).unwrap(), 1).is_err());
    }
}

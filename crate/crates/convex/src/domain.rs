use std::f64::consts::PI;

use crate::geom::{self, P2};
use crate::{ConvexError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Disc { radius: f64 },
    /// Strictly convex vertex list, counter-clockwise.
    Polygon { vertices: Vec<P2> },
    /// `core ⊕ B(0, radius)`: every corner of `core` replaced by a circular
    /// arc, giving a C^1 boundary. `core` may degenerate to a segment or point.
    Rounded { core: Vec<P2>, radius: f64 },
}

/// A convex body with the origin in its interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain {
    kind: DomainKind,
    // Outward unit normals and offsets of the polygon edges, `⟨n_e, x⟩ = c_e`.
    edges: Vec<(P2, f64)>,
    m: u32,
}

/// A boundary point together with the cone of outward normals of its
/// supporting lines (`normal_lo == normal_hi` at smooth points).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub position: P2,
    pub normal_lo: P2,
    pub normal_hi: P2,
}

impl BoundaryPoint {
    pub fn is_smooth(&self) -> bool {
        geom::norm(geom::sub(self.normal_lo, self.normal_hi)) < 1e-12
    }
}

fn edges_of(v: &[P2]) -> Vec<(P2, f64)> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let d = geom::sub(v[(i + 1) % n], v[i]);
            let normal = geom::unit([d[1], -d[0]]);
            (normal, geom::dot(normal, v[i]))
        })
        .collect()
}

fn validate_polygon(mut v: Vec<P2>) -> Result<Vec<P2>> {
    let n = v.len();
    if n < 3 {
        return Err(ConvexError::InvalidPolygon(format!("need at least 3 vertices, got {n}")));
    }
    if v.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(ConvexError::InvalidPolygon("non-finite vertex".into()));
    }
    if geom::signed_area2(&v) < 0.0 {
        v.reverse();
    }
    let scale = v.iter().map(|&p| geom::norm(p)).fold(0.0, f64::max);
    for i in 0..n {
        let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        if geom::norm(geom::sub(b, a)) <= 1e-12 * scale {
            return Err(ConvexError::InvalidPolygon(format!("repeated vertex at index {}", (i + 1) % n)));
        }
        let turn = geom::cross(geom::sub(b, a), geom::sub(c, b));
        let len = geom::norm(geom::sub(b, a)) * geom::norm(geom::sub(c, b));
        if turn.abs() <= 1e-12 * len {
            return Err(ConvexError::InvalidPolygon(format!("collinear vertices around index {}", (i + 1) % n)));
        }
        if turn < 0.0 {
            return Err(ConvexError::InvalidPolygon(format!("reflex vertex at index {}", (i + 1) % n)));
        }
    }
    // Total turning of exactly one revolution rules out self-intersection.
    let total: f64 = (0..n)
        .map(|i| {
            let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
            let (d1, d2) = (geom::sub(b, a), geom::sub(c, b));
            geom::cross(d1, d2).atan2(geom::dot(d1, d2))
        })
        .sum();
    if (total - 2.0 * PI).abs() > 1e-6 {
        return Err(ConvexError::InvalidPolygon("vertices wind more than once".into()));
    }
    if edges_of(&v).iter().any(|&(_, c)| c <= 0.0) {
        return Err(ConvexError::InvalidPolygon("origin is not strictly inside".into()));
    }
    Ok(v)
}

fn scale_for(circumradius: f64) -> u32 {
    let mut m = 1;
    while 2f64.powi(m as i32) <= circumradius {
        m += 1;
    }
    m
}

impl ConvexDomain {
    pub fn disc(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ConvexError::BadRadius(radius));
        }
        Ok(Self { kind: DomainKind::Disc { radius }, edges: Vec::new(), m: scale_for(radius) })
    }

    pub fn polygon(vertices: Vec<P2>) -> Result<Self> {
        let vertices = validate_polygon(vertices)?;
        let edges = edges_of(&vertices);
        let r = vertices.iter().map(|&p| geom::norm(p)).fold(0.0, f64::max);
        Ok(Self { kind: DomainKind::Polygon { vertices }, edges, m: scale_for(r) })
    }

    /// Regular `k`-gon with circumradius `r` and a vertex on the positive axis.
    pub fn ngon(k: usize, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(ConvexError::BadRadius(r));
        }
        if k < 3 {
            return Err(ConvexError::InvalidPolygon(format!("need k >= 3, got {k}")));
        }
        Self::polygon((0..k).map(|j| geom::scale(geom::polar(2.0 * PI * j as f64 / k as f64), r)).collect())
    }

    pub fn square(half_side: f64) -> Result<Self> {
        let s = half_side;
        Self::polygon(vec![[-s, -s], [s, -s], [s, s], [-s, s]])
    }

    pub fn rounded(core: Vec<P2>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ConvexError::BadRadius(radius));
        }
        if core.is_empty() {
            return Err(ConvexError::InvalidPolygon("empty core".into()));
        }
        if geom::norm(geom::project_to_convex([0.0, 0.0], &core)) >= radius {
            return Err(ConvexError::InvalidPolygon("origin is not strictly inside".into()));
        }
        let r = core.iter().map(|&p| geom::norm(p)).fold(0.0, f64::max) + radius;
        Ok(Self { kind: DomainKind::Rounded { core, radius }, edges: Vec::new(), m: scale_for(r) })
    }

    /// Parse `disc:r=1`, `polygon:pts=x0,y0;x1,y1;...` or `ngon:k=64,r=1`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |reason: &str| ConvexError::Malformed { spec: spec.to_string(), reason: reason.to_string() };
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
        match name {
            "polygon" => {
                let pts = rest.strip_prefix("pts=").ok_or_else(|| bad("expected pts=x0,y0;x1,y1;..."))?;
                let mut v = Vec::new();
                for pair in pts.split(';').filter(|s| !s.trim().is_empty()) {
                    let (x, y) = pair.split_once(',').ok_or_else(|| bad(&format!("`{pair}` is not x,y")))?;
                    v.push([num(x)?, num(y)?]);
                }
                Self::polygon(v)
            }
            "disc" | "ngon" => {
                let mut r = 1.0;
                let mut k = None;
                for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
                    let (key, val) = kv.split_once('=').ok_or_else(|| bad(&format!("`{kv}` is not key=val")))?;
                    match (name, key.trim()) {
                        (_, "r") => r = num(val)?,
                        ("ngon", "k") => {
                            let kf = num(val)?;
                            if kf.fract() != 0.0 || kf < 3.0 {
                                return Err(bad("k must be an integer >= 3"));
                            }
                            k = Some(kf as usize);
                        }
                        (_, other) => return Err(bad(&format!("unknown key `{other}`"))),
                    }
                }
                if name == "disc" {
                    Self::disc(r)
                } else {
                    Self::ngon(k.ok_or_else(|| bad("missing k"))?, r)
                }
            }
            _ => Err(bad("unknown domain kind")),
        }
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Smallest `M >= 1` with the closed domain inside `B(0, 2^M)`.
    pub fn scale_exponent(&self) -> u32 {
        self.m
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(ConvexError::BadScale(s));
        }
        match &self.kind {
            DomainKind::Disc { radius } => Self::disc(radius * s),
            DomainKind::Polygon { vertices } => Self::polygon(vertices.iter().map(|&p| geom::scale(p, s)).collect()),
            DomainKind::Rounded { core, radius } => Self::rounded(core.iter().map(|&p| geom::scale(p, s)).collect(), radius * s),
        }
    }

    /// Dilate so that the inradius about the origin is 4.
    pub fn normalized(&self) -> Result<Self> {
        self.scaled(4.0 / self.inradius())
    }

    pub fn is_normalized(&self) -> bool {
        self.inradius() >= 4.0 * (1.0 - 1e-12)
    }

    /// Distance from the origin to the boundary.
    pub fn inradius(&self) -> f64 {
        match &self.kind {
            DomainKind::Disc { radius } => *radius,
            DomainKind::Polygon { .. } => self.edges.iter().map(|e| e.1).fold(f64::INFINITY, f64::min),
            DomainKind::Rounded { core, radius } => {
                let q = geom::project_to_convex([0.0, 0.0], core);
                if geom::norm(q) > 0.0 || core.len() < 3 {
                    radius - geom::norm(q)
                } else {
                    radius + edges_of(core).iter().map(|e| e.1).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    pub fn circumradius(&self) -> f64 {
        match &self.kind {
            DomainKind::Disc { radius } => *radius,
            DomainKind::Polygon { vertices } => vertices.iter().map(|&p| geom::norm(p)).fold(0.0, f64::max),
            DomainKind::Rounded { core, radius } => core.iter().map(|&p| geom::norm(p)).fold(0.0, f64::max) + radius,
        }
    }

    pub fn diameter(&self) -> f64 {
        let pair_max = |v: &[P2]| {
            let mut d = 0.0f64;
            for a in v {
                for b in v {
                    d = d.max(geom::norm(geom::sub(*a, *b)));
                }
            }
            d
        };
        match &self.kind {
            DomainKind::Disc { radius } => 2.0 * radius,
            DomainKind::Polygon { vertices } => pair_max(vertices),
            DomainKind::Rounded { core, radius } => pair_max(core) + 2.0 * radius,
        }
    }

    /// Support function `h(n) = sup_{x ∈ Ω} ⟨x, n⟩`.
    pub fn support(&self, n: P2) -> f64 {
        match &self.kind {
            DomainKind::Disc { radius } => radius * geom::norm(n),
            DomainKind::Polygon { vertices } => vertices.iter().map(|&v| geom::dot(v, n)).fold(f64::NEG_INFINITY, f64::max),
            DomainKind::Rounded { core, radius } => {
                core.iter().map(|&v| geom::dot(v, n)).fold(f64::NEG_INFINITY, f64::max) + radius * geom::norm(n)
            }
        }
    }

    /// Closed membership, decided without the gauge bisection.
    pub fn contains(&self, p: P2) -> bool {
        match &self.kind {
            DomainKind::Disc { radius } => geom::norm(p) <= *radius,
            DomainKind::Polygon { .. } => self.edges.iter().all(|&(n, c)| geom::dot(n, p) <= c),
            DomainKind::Rounded { core, radius } => geom::norm(geom::sub(p, geom::project_to_convex(p, core))) <= *radius,
        }
    }

    /// Minkowski functional `ρ(p) = inf {t > 0 : p/t ∈ Ω}`.
    pub fn rho(&self, p: P2) -> f64 {
        if p[0] == 0.0 && p[1] == 0.0 {
            return 0.0;
        }
        match &self.kind {
            DomainKind::Disc { radius } => geom::norm(p) / radius,
            DomainKind::Polygon { .. } => {
                self.edges.iter().map(|&(n, c)| geom::dot(n, p) / c).fold(0.0, f64::max)
            }
            DomainKind::Rounded { core, radius } => {
                let len = geom::norm(p);
                let inside = |t: f64| geom::norm(geom::sub(geom::scale(p, 1.0 / t), geom::project_to_convex(geom::scale(p, 1.0 / t), core))) <= *radius;
                let mut lo = len / (self.circumradius() * (1.0 + 1e-9));
                let mut hi = len / (self.inradius() * (1.0 - 1e-9));
                while hi - lo > 1e-13 * hi {
                    let mid = 0.5 * (lo + hi);
                    if inside(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// Boundary point in the direction of angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> BoundaryPoint {
        let u = geom::polar(theta);
        self.boundary_point_along(u)
    }

    pub fn boundary_point_along(&self, u: P2) -> BoundaryPoint {
        let position = geom::scale(u, 1.0 / self.rho(u));
        match &self.kind {
            DomainKind::Disc { .. } => {
                let n = geom::unit(position);
                BoundaryPoint { position, normal_lo: n, normal_hi: n }
            }
            DomainKind::Polygon { .. } => {
                let vals: Vec<f64> = self.edges.iter().map(|&(n, c)| geom::dot(n, u) / c).collect();
                let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let k = self.edges.len();
                let hits: Vec<usize> = (0..k).filter(|&i| vals[i] >= top * (1.0 - 1e-12)).collect();
                let (lo, hi) = if hits.len() >= 2 {
                    // Adjacent edges; order as (incoming, outgoing) counter-clockwise.
                    let (a, b) = (hits[0], hits[hits.len() - 1]);
                    if (a + 1) % k == b { (a, b) } else { (b, a) }
                } else {
                    (hits[0], hits[0])
                };
                BoundaryPoint { position, normal_lo: self.edges[lo].0, normal_hi: self.edges[hi].0 }
            }
            DomainKind::Rounded { core, .. } => {
                let q = geom::project_to_convex(position, core);
                let n = geom::unit(geom::sub(position, q));
                BoundaryPoint { position, normal_lo: n, normal_hi: n }
            }
        }
    }

    /// Outward unit normal used for caps at a boundary point; at a polygon
    /// vertex the bisector of the normal cone.
    pub fn normal_at(&self, bp: &BoundaryPoint) -> P2 {
        geom::unit(geom::add(bp.normal_lo, bp.normal_hi))
    }

    pub fn polygon_edges(&self) -> &[(P2, f64)] {
        &self.edges
    }
}

/// `ρ_Ω(point)`.
pub fn minkowski_functional(domain: &ConvexDomain, point: P2) -> f64 {
    domain.rho(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_examples() {
        let disc = ConvexDomain::disc(1.0).unwrap();
        assert!((disc.rho([0.6, 0.8]) - 1.0).abs() < 1e-15);
        let sq = ConvexDomain::square(1.0).unwrap();
        assert!((sq.rho([0.5, -1.0]) - 1.0).abs() < 1e-15);
        for d in [&disc, &sq] {
            assert_eq!(d.rho([0.0, 0.0]), 0.0);
        }
    }

    #[test]
    fn spec_parsing() {
        assert!(matches!(ConvexDomain::from_spec("disc:r=2").unwrap().kind(), DomainKind::Disc { radius } if *radius == 2.0));
        let p = ConvexDomain::from_spec("polygon:pts=-1,-1;1,-1;1,1;-1,1").unwrap();
        assert_eq!(p.polygon_edges().len(), 4);
        let g = ConvexDomain::from_spec("ngon:k=8,r=1").unwrap();
        assert_eq!(g.polygon_edges().len(), 8);
        assert!(ConvexDomain::from_spec("ngon:r=1").is_err());
        assert!(ConvexDomain::from_spec("blob:r=1").is_err());
        assert!(ConvexDomain::from_spec("disc:r=0").is_err());
    }

    #[test]
    fn rejects_degenerate_polygons() {
        let collinear = vec![[-1.0, -1.0], [0.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        assert!(matches!(ConvexDomain::polygon(collinear), Err(ConvexError::InvalidPolygon(_))));
        let repeated = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, -1.0], [1.0, 1.0]];
        assert!(ConvexDomain::polygon(repeated).is_err());
        let reflex = vec![[-1.0, -1.0], [1.0, -1.0], [0.0, -0.5], [1.0, 1.0], [-1.0, 1.0]];
        assert!(ConvexDomain::polygon(reflex).is_err());
        let offset = vec![[1.0, 1.0], [2.0, 1.0], [2.0, 2.0], [1.0, 2.0]];
        assert!(ConvexDomain::polygon(offset).is_err());
        let clockwise = vec![[-1.0, 1.0], [1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]];
        assert!(ConvexDomain::polygon(clockwise).is_ok());
    }

    #[test]
    fn normalization() {
        let d = ConvexDomain::disc(1.0).unwrap().normalized().unwrap();
        assert!(d.is_normalized());
        assert_eq!(d.scale_exponent(), 3);
        let sq = ConvexDomain::square(8.0).unwrap();
        assert!(sq.is_normalized());
        assert_eq!(sq.scale_exponent(), 4);
    }

    #[test]
    fn vertex_normal_cone() {
        let sq = ConvexDomain::square(1.0).unwrap();
        let bp = sq.boundary_point(PI / 4.0);
        assert!(!bp.is_smooth());
        assert!((bp.position[0] - 1.0).abs() < 1e-12 && (bp.position[1] - 1.0).abs() < 1e-12);
        let edge = sq.boundary_point(0.1);
        assert!(edge.is_smooth());
        assert!((edge.normal_lo[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rounded_gauge() {
        let r = ConvexDomain::rounded(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]], 0.5).unwrap();
        assert!((r.rho([1.5, 0.0]) - 1.0).abs() < 1e-12);
        let c = 1.0 + 0.5 / 2f64.sqrt();
        assert!((r.rho([c, c]) - 1.0).abs() < 1e-12);
        assert!((r.inradius() - 1.5).abs() < 1e-12);
    }
}

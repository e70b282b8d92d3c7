use std::f64::consts::PI;
use std::fmt;

use crate::{KakeyaError, Result};

pub type P2 = [f64; 2];

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// A closed rectangle with long axis `direction`, `length` along it and
/// `width` across.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    center: P2,
    direction: P2,
    length: f64,
    width: f64,
}

impl Rectangle {
    pub fn new(center: P2, direction: P2, length: f64, width: f64) -> Result<Self> {
        let norm = direction[0].hypot(direction[1]);
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(KakeyaError::DegenerateRectangle(format!("direction has norm {norm}")));
        }
        if !(width > 0.0 && width.is_finite() && length.is_finite() && length >= width) {
            return Err(KakeyaError::DegenerateRectangle(format!("length {length}, width {width}")));
        }
        if !(center[0].is_finite() && center[1].is_finite()) {
            return Err(KakeyaError::DegenerateRectangle("non-finite center".into()));
        }
        Ok(Self { center, direction, length, width })
    }

    /// Long axis at angle `theta` from the `y₁` axis.
    pub fn from_angle(center: P2, theta: f64, length: f64, width: f64) -> Result<Self> {
        Self::new(center, [theta.cos(), theta.sin()], length, width)
    }

    /// The rectangle whose frame coordinates of `p` are `(s, t)`, i.e.
    /// `p = center + s e + t e⊥`.
    pub fn anchored(p: P2, theta: f64, s: f64, t: f64, length: f64, width: f64) -> Result<Self> {
        let (e, n) = frame(theta);
        let center = [p[0] - s * e[0] - t * n[0], p[1] - s * e[1] - t * n[1]];
        Self::new(center, e, length, width)
    }

    pub fn center(&self) -> P2 {
        self.center
    }

    pub fn direction(&self) -> P2 {
        self.direction
    }

    pub fn normal(&self) -> P2 {
        [-self.direction[1], self.direction[0]]
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn eccentricity(&self) -> f64 {
        self.length / self.width
    }

    pub fn area(&self) -> f64 {
        self.length * self.width
    }

    /// Direction angle folded into `[0, π)`.
    pub fn angle(&self) -> f64 {
        let a = self.direction[1].atan2(self.direction[0]);
        let a = a.rem_euclid(PI);
        if a >= PI { 0.0 } else { a }
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [P2; 4] {
        let (e, n) = (self.direction, self.normal());
        let (a, b) = (0.5 * self.length, 0.5 * self.width);
        let c = self.center;
        let at = |u: f64, v: f64| [c[0] + u * e[0] + v * n[0], c[1] + u * e[1] + v * n[1]];
        [at(-a, -b), at(a, -b), at(a, b), at(-a, b)]
    }

    /// Frame coordinates `(⟨p − c, e⟩, ⟨p − c, e⊥⟩)`.
    pub fn frame_coords(&self, p: P2) -> (f64, f64) {
        let d = [p[0] - self.center[0], p[1] - self.center[1]];
        (dot(d, self.direction), dot(d, self.normal()))
    }

    /// Closed membership with a relative tolerance of `1e-12`.
    pub fn contains(&self, p: P2) -> bool {
        let (s, t) = self.frame_coords(p);
        let tol = 1e-12 * (self.length + self.center[0].abs() + self.center[1].abs() + p[0].abs() + p[1].abs());
        s.abs() <= 0.5 * self.length + tol && t.abs() <= 0.5 * self.width + tol
    }

    /// Interval of `x` with `(x, x)` in the rectangle, if any.
    pub fn diagonal_interval(&self) -> Option<(f64, f64)> {
        let (e, n) = (self.direction, self.normal());
        let c = self.center;
        let tol = 1e-12 * (self.length + c[0].abs() + c[1].abs());
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (axis, half) in [(e, 0.5 * self.length + tol), (n, 0.5 * self.width + tol)] {
            // ⟨(x,x) − c, axis⟩ = x (a₁ + a₂) − ⟨c, axis⟩
            let k = axis[0] + axis[1];
            let off = dot(c, axis);
            if k.abs() < 1e-15 {
                if off.abs() > half {
                    return None;
                }
                continue;
            }
            let (a, b) = ((off - half) / k, (off + half) / k);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Bounding box `([y₁ lo, y₁ hi], [y₂ lo, y₂ hi])`.
    pub fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let hx = 0.5 * (self.length * self.direction[0].abs() + self.width * self.direction[1].abs());
        let hy = 0.5 * (self.length * self.direction[1].abs() + self.width * self.direction[0].abs());
        ([self.center[0] - hx, self.center[0] + hx], [self.center[1] - hy, self.center[1] + hy])
    }

    /// Closed intersection test against an axis-parallel box by separating
    /// axes (the two box axes and the two rectangle axes).
    pub fn intersects_box(&self, x: [f64; 2], y: [f64; 2]) -> bool {
        let (bx, by) = self.bbox();
        if bx[1] < x[0] || bx[0] > x[1] || by[1] < y[0] || by[0] > y[1] {
            return false;
        }
        let box_corners = [[x[0], y[0]], [x[1], y[0]], [x[1], y[1]], [x[0], y[1]]];
        for (axis, half) in [(self.direction, 0.5 * self.length), (self.normal(), 0.5 * self.width)] {
            let c = dot(self.center, axis);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for q in box_corners {
                let v = dot(q, axis);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi < c - half || lo > c + half {
                return false;
            }
        }
        true
    }

    /// Mirror image under `(y₁, y₂) ↦ (y₂, y₁)`.
    pub fn reflected(&self) -> Self {
        Self {
            center: [self.center[1], self.center[0]],
            direction: [self.direction[1], self.direction[0]],
            ..*self
        }
    }

    /// Dilation `p ↦ c p`.
    pub fn dilated(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(KakeyaError::BadParameter { name: "dilation", value: c });
        }
        Self::new([c * self.center[0], c * self.center[1]], self.direction, c * self.length, c * self.width)
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R[c=({}, {}), θ={}, {}×{}]", self.center[0], self.center[1], self.angle(), self.length, self.width)
    }
}

/// Unit long axis and its counter-clockwise normal at angle `theta`.
pub fn frame(theta: f64) -> (P2, P2) {
    let e = [theta.cos(), theta.sin()];
    (e, [-e[1], e[0]])
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

/// Sutherland–Hodgman clip of a convex polygon by `⟨n, p⟩ <= c`.
fn clip(poly: &[P2], n: P2, c: f64) -> Vec<P2> {
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        let (da, db) = (dot(n, a) - c, dot(n, b) - c);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Area of `R ∩ [x₀, x₁] × [y₀, y₁]` by clipping the corner polygon.
pub fn clipped_area(r: &Rectangle, x: [f64; 2], y: [f64; 2]) -> f64 {
    let mut poly = r.corners().to_vec();
    for (n, c) in [([1.0, 0.0], x[1]), ([-1.0, 0.0], -x[0]), ([0.0, 1.0], y[1]), ([0.0, -1.0], -y[0])] {
        poly = clip(&poly, n, c);
        if poly.len() < 3 {
            return 0.0;
        }
    }
    polygon_area(&poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_area_matches() {
        for theta in [0.0, 0.3, PI / 4.0, 2.0, 3.1] {
            let r = Rectangle::from_angle([1.5, -2.0], theta, 7.0, 0.25).unwrap();
            assert!((polygon_area(&r.corners()) - 1.75).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Rectangle::new([0.0, 0.0], [1.0, 0.1], 2.0, 1.0).is_err());
        assert!(Rectangle::new([0.0, 0.0], [1.0, 0.0], 1.0, 2.0).is_err());
        assert!(Rectangle::new([0.0, 0.0], [1.0, 0.0], 1.0, 0.0).is_err());
        assert!(Rectangle::new([0.0, 0.0], [1.0, 0.0], 1.0, 1.0).is_ok());
    }

    #[test]
    fn diagonal_interval_agrees_with_contains() {
        let r = Rectangle::from_angle([2.0, 1.0], 0.4, 6.0, 1.0).unwrap();
        let (a, b) = r.diagonal_interval().unwrap();
        for i in 0..=400 {
            let x = -5.0 + i as f64 * 0.025;
            let inside = x >= a && x <= b;
            assert_eq!(inside, r.contains([x, x]), "x = {x}");
        }
        let far = Rectangle::from_angle([5.0, -5.0], PI / 4.0, 4.0, 1.0).unwrap();
        assert!(far.diagonal_interval().is_none());
    }

    #[test]
    fn box_test_matches_clipping() {
        let r = Rectangle::from_angle([0.3, 0.2], 0.7, 3.0, 0.5).unwrap();
        for i in -6..6 {
            for j in -6..6 {
                let (x, y) = ([i as f64 * 0.5, i as f64 * 0.5 + 0.5], [j as f64 * 0.5, j as f64 * 0.5 + 0.5]);
                let area = clipped_area(&r, x, y);
                if area > 1e-12 {
                    assert!(r.intersects_box(x, y));
                }
            }
        }
        // Shared edge only: closed sets meet.
        let a = Rectangle::new([0.5, 0.5], [1.0, 0.0], 1.0, 1.0).unwrap();
        assert!(a.intersects_box([1.0, 2.0], [0.0, 1.0]));
        assert!(!a.intersects_box([1.0 + 1e-9, 2.0], [0.0, 1.0]));
    }

    #[test]
    fn reflection_swaps_coordinates() {
        let r = Rectangle::from_angle([1.0, 3.0], 0.2, 4.0, 1.0).unwrap();
        let m = r.reflected();
        for c in r.corners() {
            assert!(m.contains([c[1], c[0]]));
        }
    }
}

//! Small vector helpers on `[f64; 2]`.

pub type P2 = [f64; 2];

pub fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn scale(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}

pub fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

pub fn unit(a: P2) -> P2 {
    scale(a, 1.0 / norm(a))
}

/// Counter-clockwise quarter turn.
pub fn perp(a: P2) -> P2 {
    [-a[1], a[0]]
}

pub fn polar(theta: f64) -> P2 {
    [theta.cos(), theta.sin()]
}

/// Twice the signed area of a polygon.
pub fn signed_area2(pts: &[P2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| cross(pts[i], pts[(i + 1) % n])).sum()
}

/// Distance from `p` to the segment `[a, b]`.
pub fn dist_to_segment(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return norm(sub(p, a));
    }
    let t = (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0);
    norm(sub(p, add(a, scale(ab, t))))
}

/// Nearest point of a convex polygon (counter-clockwise, possibly
/// degenerate to a segment or a point) to `p`.
pub fn project_to_convex(p: P2, poly: &[P2]) -> P2 {
    let n = poly.len();
    if n == 1 {
        return poly[0];
    }
    if n >= 3 && (0..n).all(|i| cross(sub(poly[(i + 1) % n], poly[i]), sub(p, poly[i])) >= 0.0) {
        return p;
    }
    let mut best = poly[0];
    let mut best_d = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let ab = sub(b, a);
        let len2 = dot(ab, ab);
        let t = if len2 == 0.0 { 0.0 } else { (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0) };
        let q = add(a, scale(ab, t));
        let d = norm(sub(p, q));
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    best
}

/// Clip a convex polygon against the half-plane `⟨n, x⟩ <= c`.
pub fn clip_halfplane(poly: &[P2], n: P2, c: f64) -> Vec<P2> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        let (da, db) = (dot(n, a) - c, dot(n, b) - c);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(add(a, scale(sub(b, a), t)));
        }
    }
    out
}

/// Counter-clockwise convex hull with collinear points dropped.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut p: Vec<P2> = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let scale = p.iter().map(|&q| norm(q)).fold(0.0, f64::max);
    let keep = |h: &Vec<P2>, q: P2| {
        let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
        cross(sub(b, a), sub(q, a)) > 1e-14 * scale * scale
    };
    let mut lower: Vec<P2> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && !keep(&lower, q) {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && !keep(&upper, q) {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

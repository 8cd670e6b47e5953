use super::{CospherePoint, ManifoldKind, ManifoldPoint};
use crate::error::{Error, Result};

fn frame(theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([ct * cp, ct * sp, -st], [-sp, cp, 0.0])
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Unit position `x ∈ R³` and the unit tangent `v` metrically dual to `ξ`.
pub fn to_ambient(c: &CospherePoint) -> Result<([f64; 3], [f64; 3])> {
    if c.base().kind() != ManifoldKind::Sphere2 {
        return Err(Error::Unsupported("ambient coordinates exist for sphere2 only".into()));
    }
    let [theta, phi] = c.base().coords();
    let x = c.base().ambient().expect("sphere point");
    let (et, ep) = frame(theta, phi);
    let [a, b] = c.xi();
    let s = theta.sin();
    let v = [a * et[0] + b / s * ep[0], a * et[1] + b / s * ep[1], a * et[2] + b / s * ep[2]];
    Ok((x, v))
}

/// Inverse of [`to_ambient`]; `v` is projected to the tangent plane and
/// normalized first.
pub fn from_ambient(x: [f64; 3], v: [f64; 3]) -> Result<CospherePoint> {
    let r = dot3(&x, &x).sqrt();
    let x = [x[0] / r, x[1] / r, x[2] / r];
    let theta = x[2].clamp(-1.0, 1.0).acos();
    let phi = x[1].atan2(x[0]);
    let base = ManifoldPoint::sphere(theta, phi)?;
    let xv = dot3(&x, &v);
    let mut t = [v[0] - xv * x[0], v[1] - xv * x[1], v[2] - xv * x[2]];
    let tn = dot3(&t, &t).sqrt();
    if !(tn > 0.0) {
        return Err(Error::Input("tangent vector vanishes".into()));
    }
    t.iter_mut().for_each(|c| *c /= tn);
    let (et, ep) = frame(theta, phi);
    let xi = [dot3(&t, &et), theta.sin() * dot3(&t, &ep)];
    CospherePoint::normalized(base, xi)
}

/// The round-sphere geodesic flow `G^t`, computed by rotating in the plane
/// spanned by `x` and `v`.
pub fn geodesic_flow_sphere(c: &CospherePoint, t: f64) -> Result<CospherePoint> {
    let (x, v) = to_ambient(c)?;
    let (s, co) = t.sin_cos();
    let xt = [co * x[0] + s * v[0], co * x[1] + s * v[1], co * x[2] + s * v[2]];
    let vt = [-s * x[0] + co * v[0], -s * x[1] + co * v[1], -s * x[2] + co * v[2]];
    from_ambient(xt, vt)
}

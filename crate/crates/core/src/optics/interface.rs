//! Smooth dielectric interface: Snell refraction and exact unpolarised
//! Fresnel coefficients.

use crate::geom::Vec3;

/// Mirror reflection of `incident` about `normal`.
#[inline]
pub fn reflect(incident: Vec3, normal: Vec3) -> Vec3 {
    incident - normal * (2.0 * incident.dot(normal))
}

/// Transmitted direction for `incident` crossing a surface whose `normal`
/// faces against it, with `eta_ratio = n_from / n_to`.
///
/// Returns `None` under total internal reflection.
#[inline]
pub fn refract(incident: Vec3, normal: Vec3, eta_ratio: f64) -> Option<Vec3> {
    debug_assert!(incident.is_unit(1e-9) && normal.is_unit(1e-9));
    debug_assert!(eta_ratio > 0.0);
    let cos_i = -incident.dot(normal);
    debug_assert!(cos_i >= -1e-12, "normal must oppose the incident direction");
    let sin2_t = eta_ratio * eta_ratio * (1.0 - cos_i * cos_i).max(0.0);
    if sin2_t > 1.0 {
        return None;
    }
    let cos_t = (1.0 - sin2_t).sqrt();
    Some(incident * eta_ratio + normal * (eta_ratio * cos_i - cos_t))
}

/// Critical angle (radians) for light inside a medium of index `n_dense`
/// meeting one of index `n_rare`.
pub fn critical_angle(n_dense: f64, n_rare: f64) -> Option<f64> {
    (n_dense > n_rare).then(|| (n_rare / n_dense).asin())
}

/// Cosine of the transmitted angle, or `None` past the critical angle.
#[inline]
fn cos_transmitted(cos_i: f64, eta_from: f64, eta_to: f64) -> Option<f64> {
    let sin_i = (1.0 - cos_i * cos_i).max(0.0).sqrt();
    let sin_t = eta_from / eta_to * sin_i;
    if sin_t >= 1.0 {
        None
    } else {
        Some((1.0 - sin_t * sin_t).sqrt())
    }
}

/// Unpolarised Fresnel reflectance for light travelling from index
/// `eta_from` into `eta_to`, `cos_incident` measured against the normal on
/// the incident side.
pub fn fresnel_reflectance(cos_incident: f64, eta_from: f64, eta_to: f64) -> f64 {
    debug_assert!(eta_from > 0.0 && eta_to > 0.0);
    let ci = cos_incident.clamp(0.0, 1.0);
    let Some(ct) = cos_transmitted(ci, eta_from, eta_to) else {
        return 1.0;
    };
    let rs = (eta_from * ci - eta_to * ct) / (eta_from * ci + eta_to * ct);
    let rp = (eta_to * ci - eta_from * ct) / (eta_to * ci + eta_from * ct);
    (0.5 * (rs * rs + rp * rp)).clamp(0.0, 1.0)
}

/// Unpolarised Fresnel transmittance, evaluated from the transmission
/// amplitude coefficients rather than as `1 - R`.
pub fn fresnel_transmittance(cos_incident: f64, eta_from: f64, eta_to: f64) -> f64 {
    let ci = cos_incident.clamp(0.0, 1.0);
    let Some(ct) = cos_transmitted(ci, eta_from, eta_to) else {
        return 0.0;
    };
    if ci == 0.0 {
        return 0.0;
    }
    let ts = 2.0 * eta_from * ci / (eta_from * ci + eta_to * ct);
    let tp = 2.0 * eta_from * ci / (eta_to * ci + eta_from * ct);
    // Power transmittance carries the beam-area / impedance factor.
    let factor = eta_to * ct / (eta_from * ci);
    0.5 * factor * (ts * ts + tp * tp)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GLASS: f64 = 1.51714;

    fn dir_at(angle: f64) -> Vec3 {
        // Travelling downwards (-z) tilted by `angle` towards +x.
        Vec3::new(angle.sin(), 0.0, -angle.cos())
    }

    #[test]
    fn normal_incidence_passes_straight() {
        for eta in [0.5, 1.0 / GLASS, 1.0, GLASS] {
            let t = refract(-Vec3::Z, Vec3::Z, eta).unwrap();
            assert!((t - (-Vec3::Z)).length() < 1e-15);
        }
    }

    #[test]
    fn snell_at_45_degrees() {
        let theta = 45f64.to_radians();
        let t = refract(dir_at(theta), Vec3::Z, 1.0 / GLASS).unwrap();
        // Recover the refraction angle from the output direction.
        let recovered = t.x.atan2(-t.z);
        let expected = (theta.sin() / GLASS).asin();
        assert!((recovered - expected).abs() < 1e-12);
        assert!(t.is_unit(1e-12));
    }

    #[test]
    fn total_internal_reflection_beyond_critical_angle() {
        let crit = critical_angle(GLASS, 1.0).unwrap();
        assert!((crit - (1.0 / GLASS).asin()).abs() < 1e-15);
        let delta = 0.1f64.to_radians();
        assert!(refract(dir_at(crit + delta), Vec3::Z, GLASS).is_none());
        assert!(refract(dir_at(crit - delta), Vec3::Z, GLASS).is_some());
        assert_eq!(fresnel_reflectance((crit + delta).cos(), GLASS, 1.0), 1.0);
        assert!(fresnel_reflectance((crit - delta).cos(), GLASS, 1.0) < 1.0);
    }

    #[test]
    fn normal_incidence_reflectance() {
        let expected = ((GLASS - 1.0) / (GLASS + 1.0)).powi(2);
        assert!((fresnel_reflectance(1.0, 1.0, GLASS) - expected).abs() < 1e-15);
        assert!((expected - 0.0422).abs() < 5e-5);
    }

    #[test]
    fn grazing_reflectance_tends_to_one() {
        assert!(fresnel_reflectance(1e-9, 1.0, GLASS) > 0.999_999);
        assert_eq!(fresnel_reflectance(0.0, 1.0, GLASS), 1.0);
    }

    #[test]
    fn reflect_preserves_tangent() {
        let d = dir_at(0.3);
        let r = reflect(d, Vec3::Z);
        assert!((r.x - d.x).abs() < 1e-15 && (r.z + d.z).abs() < 1e-15);
    }
}

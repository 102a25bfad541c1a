//! Unidirectional path tracing with next-event estimation of the main
//! light and stochastic Fresnel choice at the orb.

use std::f64::consts::PI;

use crate::color::Rgb;
use crate::geom::{Ray, SurfaceHit, Vec3};
use crate::optics::{
    fresnel_reflectance, reflect, refract, DielectricSpec, Medium, MediumId, MediumStack, OpticsError,
};
use crate::scene::{Scene, Surface};

use super::sampler::SampleStream;

pub const GLASS: MediumId = MediumId(1);
const ROULETTE_DEPTH: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DielectricEvent {
    pub ray: Ray,
    /// Throughput multiplier for the chosen branch.
    pub weight: Rgb,
    pub transmitted: bool,
}

/// Picks reflection or transmission at an orb interface with probability
/// equal to the Fresnel reflectance, and keeps `stack` in step.
pub fn shade_dielectric(
    ray: &Ray,
    hit: &SurfaceHit,
    stack: &mut MediumStack,
    glass: &DielectricSpec,
    u: f64,
) -> Result<DielectricEvent, OpticsError> {
    let n_from = stack.top().ior;
    let n_to = if hit.entering {
        glass.ior
    } else {
        match stack.below_top() {
            Some(m) => m.ior,
            None => {
                return Err(OpticsError::StackUnderflow {
                    primitive: hit.primitive,
                    expected: GLASS,
                    found: stack.top().id,
                })
            }
        }
    };
    let facing = if hit.entering { hit.normal } else { -hit.normal };
    let cos_i = -ray.dir.dot(facing);
    let reflectance = fresnel_reflectance(cos_i, n_from, n_to);
    let transmitted = if u >= reflectance {
        refract(ray.dir, facing, n_from / n_to)
    } else {
        None
    };
    match transmitted {
        Some(dir) => {
            if hit.entering {
                stack.push(
                    Medium {
                        id: GLASS,
                        ior: glass.ior,
                    },
                    hit.primitive,
                )?;
            } else {
                stack.pop(GLASS, hit.primitive)?;
            }
            Ok(DielectricEvent {
                ray: Ray::spawn(hit.point, hit.normal, dir),
                weight: glass.crossing_tint(),
                transmitted: true,
            })
        }
        None => Ok(DielectricEvent {
            ray: Ray::spawn(hit.point, hit.normal, reflect(ray.dir, facing)),
            weight: Rgb::WHITE,
            transmitted: false,
        }),
    }
}

/// Cosine-weighted direction about `n`.
fn cosine_hemisphere(n: Vec3, u1: f64, u2: f64) -> Vec3 {
    let (t, b) = n.orthonormal_basis();
    let r = u1.sqrt();
    let phi = 2.0 * PI * u2;
    (t * (r * phi.cos()) + b * (r * phi.sin()) + n * (1.0 - u1).max(0.0).sqrt()).normalized()
}

/// Radiance arriving along `ray`.
pub fn radiance(scene: &Scene, ray: Ray, stream: &SampleStream, max_depth: u32) -> Result<Rgb, OpticsError> {
    let mut ray = ray;
    let mut beta = Rgb::WHITE;
    let mut l = Rgb::BLACK;
    let mut stack = MediumStack::new();
    let nl = scene.light_dirs.len();
    for bounce in 0..max_depth {
        let Some(sh) = scene.intersect(&ray) else {
            l += beta * scene.ambient;
            break;
        };
        if let Some(orb) = &scene.orb {
            if stack.top().id == GLASS {
                beta *= orb.glass.path_tint(sh.hit.t);
            }
        }
        match sh.surface {
            Surface::Orb(_) => {
                let glass = &scene.orb.as_ref().expect("orb hit without an orb").glass;
                let ev = shade_dielectric(&ray, &sh.hit, &mut stack, glass, stream.get(bounce, 0))?;
                beta *= ev.weight;
                ray = ev.ray;
            }
            Surface::Diffuse(albedo) => {
                let n = if sh.hit.normal.dot(ray.dir) < 0.0 {
                    sh.hit.normal
                } else {
                    -sh.hit.normal
                };
                if nl > 0 && !scene.light_radiance.is_black() {
                    let k = ((stream.get(bounce, 0) * nl as f64) as usize).min(nl - 1);
                    let wi = scene.light_dirs[k];
                    let cos = n.dot(wi);
                    if cos > 0.0 && !scene.occluded(&Ray::spawn(sh.hit.point, n, wi)) {
                        l += beta * albedo * scene.light_radiance * (nl as f64 * cos / PI);
                    }
                }
                beta *= albedo;
                if beta.is_black() {
                    break;
                }
                let dir = cosine_hemisphere(n, stream.get(bounce, 1), stream.get(bounce, 2));
                ray = Ray::spawn(sh.hit.point, n, dir);
            }
        }
        if bounce + 1 >= ROULETTE_DEPTH {
            let q = beta.max_channel().clamp(0.05, 1.0);
            if stream.get(bounce, 3) >= q {
                break;
            }
            beta = beta / q;
        }
    }
    Ok(l)
}

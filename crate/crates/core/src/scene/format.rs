//! Typed decoding and canonical serialisation of the scene format.
//!
//! Every length key carries a unit suffix (`_cm` or `_mm`), angles use
//! `_deg`. Values are converted to centimetres and degrees on input and
//! always written back in those units, so `parse(serialize(c)) == c`.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::color::Rgb;
use crate::geom::{Point2, Vec3};
use crate::optics::{CalciteSpec, DielectricSpec, TintMode};
use crate::render::{CropWindow, RenderSettings};

use super::config::*;
use super::syntax::{parse_items, parse_value, Item, Span, Value};
use super::SceneError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    None,
    Cm,
    Mm,
    Deg,
}

fn split_unit(key: &str) -> (&str, Unit) {
    // Densities such as `cells_per_cm` are plain numbers.
    if key.ends_with("_per_cm") {
        return (key, Unit::None);
    }
    for (suffix, unit) in [("_cm", Unit::Cm), ("_mm", Unit::Mm), ("_deg", Unit::Deg)] {
        if let Some(base) = key.strip_suffix(suffix) {
            return (base, unit);
        }
    }
    (key, Unit::None)
}

/// One assignment being decoded.
struct Field<'a> {
    block: &'a str,
    key: &'a str,
    base: &'a str,
    unit: Unit,
    value: &'a Value,
    span: Span,
}

impl<'a> Field<'a> {
    fn err(&self, message: String) -> SceneError {
        SceneError::InvalidValue {
            span: Some(self.span),
            message: format!("`{}`: {message}", self.key),
        }
    }

    fn unknown(&self) -> SceneError {
        SceneError::UnknownKey {
            span: self.span,
            block: self.block.to_string(),
            key: self.key.to_string(),
        }
    }

    fn expect_unit(&self, allowed: &[Unit]) -> Result<(), SceneError> {
        if allowed.contains(&self.unit) {
            Ok(())
        } else {
            Err(self.unknown())
        }
    }

    fn number_of(&self, v: &Value, span: Span) -> Result<f64, SceneError> {
        match v {
            Value::Number(x, _) => Ok(*x),
            other => Err(SceneError::InvalidValue {
                span: Some(span),
                message: format!("`{}`: expected a number, found a {}", self.key, other.kind()),
            }),
        }
    }

    fn number(&self) -> Result<f64, SceneError> {
        self.expect_unit(&[Unit::None])?;
        self.number_of(self.value, self.span)
    }

    fn convert(&self, x: f64) -> f64 {
        // Divide rather than multiply by 0.1 so 1.3 mm becomes exactly 0.13.
        if self.unit == Unit::Mm {
            x / 10.0
        } else {
            x
        }
    }

    fn length(&self) -> Result<f64, SceneError> {
        self.expect_unit(&[Unit::Cm, Unit::Mm])?;
        Ok(self.convert(self.number_of(self.value, self.span)?))
    }

    fn angle(&self) -> Result<f64, SceneError> {
        self.expect_unit(&[Unit::Deg])?;
        self.number_of(self.value, self.span)
    }

    fn array(&self) -> Result<&'a [(Value, Span)], SceneError> {
        match self.value {
            Value::Array(a) => Ok(a),
            other => Err(self.err(format!("expected an array, found a {}", other.kind()))),
        }
    }

    fn numbers(&self, n: usize) -> Result<Vec<f64>, SceneError> {
        let a = self.array()?;
        if a.len() != n {
            return Err(self.err(format!("expected {n} elements, found {}", a.len())));
        }
        a.iter().map(|(v, s)| self.number_of(v, *s)).collect()
    }

    fn vec3(&self) -> Result<Vec3, SceneError> {
        let v = self.numbers(3)?;
        Ok(Vec3::new(v[0], v[1], v[2]))
    }

    fn length3(&self) -> Result<Vec3, SceneError> {
        self.expect_unit(&[Unit::Cm, Unit::Mm])?;
        let v = self.vec3()?;
        Ok(Vec3::new(self.convert(v.x), self.convert(v.y), self.convert(v.z)))
    }

    fn length2(&self) -> Result<Point2, SceneError> {
        self.expect_unit(&[Unit::Cm, Unit::Mm])?;
        let v = self.numbers(2)?;
        Ok(Point2::new(self.convert(v[0]), self.convert(v[1])))
    }

    fn rgb(&self) -> Result<Rgb, SceneError> {
        self.expect_unit(&[Unit::None])?;
        match self.value {
            Value::Number(x, _) => Ok(Rgb::gray(*x)),
            _ => {
                let v = self.numbers(3)?;
                Ok(Rgb::new(v[0], v[1], v[2]))
            }
        }
    }

    fn boolean(&self) -> Result<bool, SceneError> {
        self.expect_unit(&[Unit::None])?;
        match self.word()? {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.err(format!("expected true or false, found `{other}`"))),
        }
    }

    fn word(&self) -> Result<&'a str, SceneError> {
        match self.value {
            Value::Word(w) => Ok(w),
            other => Err(self.err(format!("expected a word, found a {}", other.kind()))),
        }
    }

    fn string(&self) -> Result<String, SceneError> {
        self.expect_unit(&[Unit::None])?;
        match self.value {
            Value::Str(s) => Ok(s.clone()),
            other => Err(self.err(format!("expected a string, found a {}", other.kind()))),
        }
    }

    fn integer_of(&self, v: &Value, span: Span) -> Result<u64, SceneError> {
        match v {
            Value::Number(_, text) => text.parse::<u64>().map_err(|_| SceneError::InvalidValue {
                span: Some(span),
                message: format!("`{}`: expected a non-negative integer, found `{text}`", self.key),
            }),
            other => Err(self.err(format!("expected an integer, found a {}", other.kind()))),
        }
    }

    fn integer(&self) -> Result<u64, SceneError> {
        self.expect_unit(&[Unit::None])?;
        self.integer_of(self.value, self.span)
    }

    fn u32(&self) -> Result<u32, SceneError> {
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| self.err(format!("{v} is too large")))
    }
}

/// Walks the items of one block, rejecting duplicates.
fn each_field<'a>(
    block: &'a str,
    items: &'a [Item],
    mut on_field: impl FnMut(&Field<'a>) -> Result<(), SceneError>,
    mut on_block: impl FnMut(&'a str, &'a [Item], Span) -> Result<(), SceneError>,
) -> Result<(), SceneError> {
    let mut seen = HashSet::new();
    for item in items {
        match item {
            Item::Assign { key, value, span } => {
                let (base, unit) = split_unit(key);
                if !seen.insert(base.to_string()) {
                    return Err(SceneError::InvalidValue {
                        span: Some(*span),
                        message: format!("`{key}` given more than once in `{block}`"),
                    });
                }
                on_field(&Field {
                    block,
                    key,
                    base,
                    unit,
                    value,
                    span: *span,
                })?;
            }
            Item::Block { name, body, span } => on_block(name, body, *span)?,
        }
    }
    Ok(())
}

fn no_blocks(block: &str) -> impl FnMut(&str, &[Item], Span) -> Result<(), SceneError> + '_ {
    move |name, _, span| {
        Err(SceneError::UnknownKey {
            span,
            block: block.to_string(),
            key: name.to_string(),
        })
    }
}

fn decode_orb(items: &[Item], span: Span) -> Result<OrbSpec, SceneError> {
    let mut orb = OrbSpec::default();
    let default_glass = match orb.material {
        OrbMaterial::Dielectric(d) => d,
        OrbMaterial::Calcite(_) => DielectricSpec::default(),
    };
    let mut material: Option<String> = None;
    let mut glass = default_glass;
    let mut calcite = CalciteSpec::default();
    let mut glass_keys: Vec<Span> = Vec::new();
    let mut calcite_keys: Vec<Span> = Vec::new();
    let mut thickness_span = span;
    each_field(
        "orb",
        items,
        |f| {
            match f.base {
                "enabled" => orb.enabled = f.boolean()?,
                "center" => orb.center = f.length3()?,
                "radius" => orb.radius = f.length()?,
                "thickness" => {
                    thickness_span = f.span;
                    orb.thickness = if f.unit == Unit::None {
                        match f.word()? {
                            "solid" => Thickness::Solid,
                            w => return Err(f.err(format!("expected `solid` or a length key, found `{w}`"))),
                        }
                    } else {
                        Thickness::Shell(f.length()?)
                    };
                }
                "lateral_shift" => orb.lateral_shift = f.length()?,
                "material" => {
                    f.expect_unit(&[Unit::None])?;
                    let w = f.word()?;
                    if w != "glass" && w != "calcite" {
                        return Err(f.err(format!("expected `glass` or `calcite`, found `{w}`")));
                    }
                    material = Some(w.to_string());
                }
                "ior" => {
                    glass.ior = f.number()?;
                    glass_keys.push(f.span);
                }
                "tint" => {
                    glass.tint = f.rgb()?;
                    glass_keys.push(f.span);
                }
                "tint_mode" => {
                    f.expect_unit(&[Unit::None])?;
                    glass.tint_mode = match f.word()? {
                        "per_crossing" => TintMode::PerCrossing,
                        "per_length" => TintMode::PerLength,
                        w => return Err(f.err(format!("expected `per_crossing` or `per_length`, found `{w}`"))),
                    };
                    glass_keys.push(f.span);
                }
                "absorption_per_cm" => {
                    glass.absorption_per_cm = f.rgb()?;
                    glass_keys.push(f.span);
                }
                "ior_ordinary" => {
                    calcite.ior_ordinary = f.number()?;
                    calcite_keys.push(f.span);
                }
                "ior_extraordinary" => {
                    calcite.ior_extraordinary = f.number()?;
                    calcite_keys.push(f.span);
                }
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("orb"),
    )?;
    let is_calcite = material.as_deref() == Some("calcite");
    if is_calcite {
        if let Some(s) = glass_keys.first() {
            return Err(SceneError::InvalidValue {
                span: Some(*s),
                message: "glass parameters given for a calcite orb".into(),
            });
        }
        orb.material = OrbMaterial::Calcite(calcite);
    } else {
        if let Some(s) = calcite_keys.first() {
            return Err(SceneError::InvalidValue {
                span: Some(*s),
                message: "calcite indices given for a glass orb".into(),
            });
        }
        orb.material = OrbMaterial::Dielectric(glass);
    }
    orb.validate().map_err(|e| e.at(thickness_span))?;
    Ok(orb)
}

fn decode_camera(items: &[Item], span: Span) -> Result<CameraSpec, SceneError> {
    let mut cam = CameraSpec::default();
    each_field(
        "camera",
        items,
        |f| {
            match f.base {
                "position" => cam.position = f.length3()?,
                "look_at" => cam.look_at = f.length3()?,
                "up" => {
                    f.expect_unit(&[Unit::None])?;
                    cam.up = f.vec3()?;
                }
                "vertical_fov" => cam.vertical_fov_deg = f.angle()?,
                "width" => cam.width = f.u32()?,
                "height" => cam.height = f.u32()?,
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("camera"),
    )?;
    cam.validate().map_err(|e| e.at(span))?;
    Ok(cam)
}

fn decode_lights(items: &[Item], span: Span) -> Result<LightRigSpec, SceneError> {
    let mut l = LightRigSpec::default();
    let mut ambient_given = false;
    each_field(
        "lights",
        items,
        |f| {
            match f.base {
                "elevation" => l.elevation_deg = f.angle()?,
                "azimuth" => l.azimuth_deg = f.angle()?,
                "cone_half_angle" => l.cone_half_angle_deg = f.angle()?,
                "directions" => l.directions = f.u32()?,
                "main_radiance" => l.main_radiance = f.rgb()?,
                "ambient_radiance" => {
                    l.ambient_radiance = f.rgb()?;
                    ambient_given = true;
                }
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("lights"),
    )?;
    if !ambient_given {
        l.ambient_radiance = l.main_radiance * 0.04;
    }
    l.validate().map_err(|e| e.at(span))?;
    Ok(l)
}

fn decode_fold(items: &[Item], span: Span) -> Result<FoldSpec, SceneError> {
    let mut fold = FoldSpec::converging(0.0);
    let mut has_angle = false;
    each_field(
        "fold",
        items,
        |f| {
            match f.base {
                "angle" => {
                    fold.angle_deg = f.angle()?;
                    has_angle = true;
                }
                "offset" => fold.offset = f.length()?,
                "start" => fold.start = f.length()?,
                "length" => fold.length = f.length()?,
                "bend" => fold.bend_deg = f.angle()?,
                "bend_length" => fold.bend_length = f.length()?,
                "ridge_width" => fold.ridge_width = f.length()?,
                "ridge_height" => fold.ridge_height = f.length()?,
                "crease_width" => fold.crease_width = f.length()?,
                "crease_albedo" => fold.crease_albedo = f.number()?,
                "exempt" => fold.exempt = f.boolean()?,
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("fold"),
    )?;
    if !has_angle {
        return Err(SceneError::InvalidValue {
            span: Some(span),
            message: "fold needs `angle_deg`".into(),
        });
    }
    Ok(fold)
}

fn decode_stroke(items: &[Item], span: Span) -> Result<StrokeSpec, SceneError> {
    let mut stroke = StrokeSpec {
        points: Vec::new(),
        width: 0.3,
        albedo: Rgb::gray(0.05),
    };
    each_field(
        "stroke",
        items,
        |f| {
            match f.base {
                "points" => {
                    f.expect_unit(&[Unit::Cm, Unit::Mm])?;
                    stroke.points = f
                        .array()?
                        .iter()
                        .map(|(v, s)| {
                            let Value::Array(xy) = v else {
                                return Err(SceneError::InvalidValue {
                                    span: Some(*s),
                                    message: "stroke point must be [x, y]".into(),
                                });
                            };
                            if xy.len() != 2 {
                                return Err(SceneError::InvalidValue {
                                    span: Some(*s),
                                    message: "stroke point must be [x, y]".into(),
                                });
                            }
                            let x = f.number_of(&xy[0].0, xy[0].1)?;
                            let y = f.number_of(&xy[1].0, xy[1].1)?;
                            Ok(Point2::new(f.convert(x), f.convert(y)))
                        })
                        .collect::<Result<_, _>>()?;
                }
                "width" => stroke.width = f.length()?,
                "albedo" => stroke.albedo = f.rgb()?,
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("stroke"),
    )?;
    if stroke.points.len() < 2 {
        return Err(SceneError::InvalidValue {
            span: Some(span),
            message: "stroke needs at least two points".into(),
        });
    }
    Ok(stroke)
}

fn decode_relief(items: &[Item], span: Span) -> Result<ReliefSpec, SceneError> {
    let mut r = ReliefSpec::default();
    let mut folds = Vec::new();
    let mut strokes = Vec::new();
    let mut any_fold = false;
    let mut clear_folds = false;
    let mut texture_path: Option<String> = None;
    let mut texture_extent: Option<[f64; 4]> = None;
    let mut extent_span = span;
    each_field(
        "relief",
        items,
        |f| {
            match f.base {
                "enabled" => r.enabled = f.boolean()?,
                "standoff" => r.standoff = f.length()?,
                "cells_per_cm" => r.cells_per_cm = f.number()?,
                "convergence" => r.convergence = f.boolean()?,
                "convergence_point" => r.convergence_point = Some(f.length2()?),
                "dark_albedo" => r.albedo.dark = f.rgb()?,
                "bright_albedo" => r.albedo.bright = f.rgb()?,
                "gradient_angle" => r.albedo.gradient_angle_deg = f.angle()?,
                "gradient_width" => r.albedo.gradient_width = f.length()?,
                "texture" => texture_path = Some(f.string()?),
                "texture_extent" => {
                    f.expect_unit(&[Unit::Cm, Unit::Mm])?;
                    extent_span = f.span;
                    let v = f.numbers(4)?;
                    texture_extent = Some([f.convert(v[0]), f.convert(v[1]), f.convert(v[2]), f.convert(v[3])]);
                }
                "folds" => {
                    // `folds = none` clears the default fold set.
                    f.expect_unit(&[Unit::None])?;
                    if f.word()? != "none" {
                        return Err(f.err("only `none` is accepted".into()));
                    }
                    clear_folds = true;
                }
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        |name, body, s| {
            match name {
                "fold" => {
                    folds.push(decode_fold(body, s)?);
                    any_fold = true;
                }
                "stroke" => strokes.push(decode_stroke(body, s)?),
                _ => {
                    return Err(SceneError::UnknownKey {
                        span: s,
                        block: "relief".into(),
                        key: name.into(),
                    })
                }
            }
            Ok(())
        },
    )?;
    if any_fold || clear_folds {
        r.folds = folds;
    }
    r.strokes = strokes;
    r.texture = match (texture_path, texture_extent) {
        (Some(path), extent) => Some(TextureSpec {
            path,
            extent: extent.unwrap_or([-40.0, -40.0, 40.0, 40.0]),
        }),
        (None, Some(_)) => {
            return Err(SceneError::InvalidValue {
                span: Some(extent_span),
                message: "texture_extent given without a texture".into(),
            })
        }
        (None, None) => None,
    };
    r.validate().map_err(|e| e.at(span))?;
    Ok(r)
}

fn decode_mesh(items: &[Item], span: Span) -> Result<MeshSpec, SceneError> {
    let mut m = MeshSpec {
        path: String::new(),
        translate: Vec3::ZERO,
        scale: 1.0,
        albedo: Rgb::gray(0.5),
    };
    each_field(
        "mesh",
        items,
        |f| {
            match f.base {
                "path" => m.path = f.string()?,
                "translate" => m.translate = f.length3()?,
                "scale" => m.scale = f.number()?,
                "albedo" => m.albedo = f.rgb()?,
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("mesh"),
    )?;
    if m.path.is_empty() {
        return Err(SceneError::InvalidValue {
            span: Some(span),
            message: "mesh needs a `path`".into(),
        });
    }
    Ok(m)
}

fn decode_render(items: &[Item], span: Span) -> Result<RenderSettings, SceneError> {
    let mut s = RenderSettings::default();
    each_field(
        "render",
        items,
        |f| {
            match f.base {
                "spp" => s.samples_per_pixel = f.u32()?,
                "max_depth" => s.max_depth = f.u32()?,
                "seed" => s.seed = f.integer()?,
                "gamma" => s.gamma = f.number()?,
                "strict" => s.strict = f.boolean()?,
                "crop" => {
                    f.expect_unit(&[Unit::None])?;
                    let a = f.array()?;
                    if a.len() != 4 {
                        return Err(f.err("crop must be [x0, y0, x1, y1]".into()));
                    }
                    let v: Vec<u32> = a
                        .iter()
                        .map(|(v, sp)| f.integer_of(v, *sp).map(|x| x.min(u32::MAX as u64) as u32))
                        .collect::<Result<_, _>>()?;
                    s.crop = Some(CropWindow {
                        x0: v[0],
                        y0: v[1],
                        x1: v[2],
                        y1: v[3],
                    });
                }
                _ => return Err(f.unknown()),
            }
            Ok(())
        },
        no_blocks("render"),
    )?;
    s.validate().map_err(|e| SceneError::from(e).at(span))?;
    Ok(s)
}

fn decode(items: &[Item]) -> Result<SceneConfig, SceneError> {
    let mut cfg = SceneConfig::default();
    let mut seen = HashSet::new();
    for item in items {
        let Item::Block { name, body, span } = item else {
            return Err(SceneError::UnknownKey {
                span: item.span(),
                block: "<top level>".into(),
                key: item.key().into(),
            });
        };
        if name != "mesh" && !seen.insert(name.clone()) {
            return Err(SceneError::InvalidValue {
                span: Some(*span),
                message: format!("block `{name}` given more than once"),
            });
        }
        match name.as_str() {
            "orb" => cfg.orb = decode_orb(body, *span)?,
            "camera" => cfg.camera = decode_camera(body, *span)?,
            "lights" => cfg.lights = decode_lights(body, *span)?,
            "relief" => cfg.relief = decode_relief(body, *span)?,
            "mesh" => cfg.meshes.push(decode_mesh(body, *span)?),
            "render" => cfg.render = decode_render(body, *span)?,
            _ => {
                return Err(SceneError::UnknownKey {
                    span: *span,
                    block: "<top level>".into(),
                    key: name.clone(),
                })
            }
        }
    }
    if let Some(c) = cfg.render.crop {
        if c.x1 > cfg.camera.width || c.y1 > cfg.camera.height {
            return Err(SceneError::invalid("crop window extends past the image"));
        }
    }
    Ok(cfg)
}

/// Parses and validates a scene file. Missing keys take their defaults.
pub fn parse_scene(text: &str) -> Result<SceneConfig, SceneError> {
    decode(&parse_items(text)?)
}

/// A `block.key=value` assignment applied on top of a scene file.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub path: Vec<String>,
    pub value: Value,
    pub text: String,
}

impl std::str::FromStr for Override {
    type Err = SceneError;

    fn from_str(s: &str) -> Result<Self, SceneError> {
        let bad = |m: &str| SceneError::InvalidValue {
            span: None,
            message: format!("override `{s}`: {m}"),
        };
        let (path, value) = s.split_once('=').ok_or_else(|| bad("expected path=value"))?;
        let path: Vec<String> = path.trim().split('.').map(str::to_string).collect();
        if path.len() < 2 || path.iter().any(|p| p.is_empty()) {
            return Err(bad("path must look like block.key"));
        }
        Ok(Override {
            path,
            value: parse_value(value.trim()).map_err(|e| bad(&e.to_string()))?,
            text: s.to_string(),
        })
    }
}

/// Inserts `ov` into the syntax tree. Any existing assignment with the same
/// key, whatever its unit suffix, is replaced. A numeric path element
/// selects among repeated blocks (`relief.fold.2.offset_cm`).
pub fn apply_override(items: &mut Vec<Item>, ov: &Override) -> Result<(), SceneError> {
    let (key, blocks) = ov.path.split_last().expect("validated path");
    let mut cur = items;
    let mut i = 0;
    while i < blocks.len() {
        let name = &blocks[i];
        let index = blocks.get(i + 1).and_then(|s| s.parse::<usize>().ok());
        let matches: Vec<usize> = cur
            .iter()
            .enumerate()
            .filter(|(_, it)| matches!(it, Item::Block { name: n, .. } if n == name))
            .map(|(k, _)| k)
            .collect();
        let pos = match index {
            Some(n) => *matches.get(n).ok_or_else(|| SceneError::InvalidValue {
                span: None,
                message: format!("override `{}`: no {name} block number {n}", ov.text),
            })?,
            None => match matches.first() {
                Some(&k) => k,
                None => {
                    cur.push(Item::Block {
                        name: name.clone(),
                        body: Vec::new(),
                        span: Span::default(),
                    });
                    cur.len() - 1
                }
            },
        };
        let Item::Block { body, .. } = &mut cur[pos] else {
            unreachable!()
        };
        cur = body;
        i += if index.is_some() { 2 } else { 1 };
    }
    let base = split_unit(key).0;
    cur.retain(|it| !matches!(it, Item::Assign { key: k, .. } if split_unit(k).0 == base));
    cur.push(Item::Assign {
        key: key.clone(),
        value: ov.value.clone(),
        span: Span::default(),
    });
    Ok(())
}

pub fn parse_scene_with_overrides(text: &str, overrides: &[Override]) -> Result<SceneConfig, SceneError> {
    let mut items = parse_items(text)?;
    for ov in overrides {
        apply_override(&mut items, ov)?;
    }
    decode(&items)
}

/// `Display` for f64 is the shortest text that parses back exactly.
fn num(x: f64) -> String {
    format!("{x}")
}

fn list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn rgb(c: Rgb) -> String {
    list(&c.channels())
}

fn v3(v: Vec3) -> String {
    list(&[v.x, v.y, v.z])
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Canonical text for `cfg`: every field, fixed order, cm and degrees.
pub fn serialize_scene(cfg: &SceneConfig) -> String {
    let mut s = String::new();
    let o = &cfg.orb;
    let _ = writeln!(s, "orb {{");
    let _ = writeln!(s, "  enabled = {}", o.enabled);
    let _ = writeln!(s, "  center_cm = {}", v3(o.center));
    let _ = writeln!(s, "  radius_cm = {}", num(o.radius));
    match o.thickness {
        Thickness::Solid => {
            let _ = writeln!(s, "  thickness = solid");
        }
        Thickness::Shell(t) => {
            let _ = writeln!(s, "  thickness_cm = {}", num(t));
        }
    }
    let _ = writeln!(s, "  lateral_shift_cm = {}", num(o.lateral_shift));
    match &o.material {
        OrbMaterial::Dielectric(d) => {
            let _ = writeln!(s, "  material = glass");
            let _ = writeln!(s, "  ior = {}", num(d.ior));
            let _ = writeln!(s, "  tint = {}", rgb(d.tint));
            let mode = match d.tint_mode {
                TintMode::PerCrossing => "per_crossing",
                TintMode::PerLength => "per_length",
            };
            let _ = writeln!(s, "  tint_mode = {mode}");
            let _ = writeln!(s, "  absorption_per_cm = {}", rgb(d.absorption_per_cm));
        }
        OrbMaterial::Calcite(c) => {
            let _ = writeln!(s, "  material = calcite");
            let _ = writeln!(s, "  ior_ordinary = {}", num(c.ior_ordinary));
            let _ = writeln!(s, "  ior_extraordinary = {}", num(c.ior_extraordinary));
        }
    }
    let _ = writeln!(s, "}}\n");

    let c = &cfg.camera;
    let _ = writeln!(s, "camera {{");
    let _ = writeln!(s, "  position_cm = {}", v3(c.position));
    let _ = writeln!(s, "  look_at_cm = {}", v3(c.look_at));
    let _ = writeln!(s, "  up = {}", v3(c.up));
    let _ = writeln!(s, "  vertical_fov_deg = {}", num(c.vertical_fov_deg));
    let _ = writeln!(s, "  width = {}", c.width);
    let _ = writeln!(s, "  height = {}", c.height);
    let _ = writeln!(s, "}}\n");

    let l = &cfg.lights;
    let _ = writeln!(s, "lights {{");
    let _ = writeln!(s, "  elevation_deg = {}", num(l.elevation_deg));
    let _ = writeln!(s, "  azimuth_deg = {}", num(l.azimuth_deg));
    let _ = writeln!(s, "  cone_half_angle_deg = {}", num(l.cone_half_angle_deg));
    let _ = writeln!(s, "  directions = {}", l.directions);
    let _ = writeln!(s, "  main_radiance = {}", rgb(l.main_radiance));
    let _ = writeln!(s, "  ambient_radiance = {}", rgb(l.ambient_radiance));
    let _ = writeln!(s, "}}\n");

    let r = &cfg.relief;
    let _ = writeln!(s, "relief {{");
    let _ = writeln!(s, "  enabled = {}", r.enabled);
    let _ = writeln!(s, "  standoff_cm = {}", num(r.standoff));
    let _ = writeln!(s, "  cells_per_cm = {}", num(r.cells_per_cm));
    let _ = writeln!(s, "  convergence = {}", r.convergence);
    if let Some(p) = r.convergence_point {
        let _ = writeln!(s, "  convergence_point_cm = {}", list(&[p.x, p.y]));
    }
    let _ = writeln!(s, "  dark_albedo = {}", rgb(r.albedo.dark));
    let _ = writeln!(s, "  bright_albedo = {}", rgb(r.albedo.bright));
    let _ = writeln!(s, "  gradient_angle_deg = {}", num(r.albedo.gradient_angle_deg));
    let _ = writeln!(s, "  gradient_width_cm = {}", num(r.albedo.gradient_width));
    if let Some(t) = &r.texture {
        let _ = writeln!(s, "  texture = {}", quote(&t.path));
        let _ = writeln!(s, "  texture_extent_cm = {}", list(&t.extent));
    }
    if r.folds.is_empty() {
        let _ = writeln!(s, "  folds = none");
    }
    for f in &r.folds {
        let _ = writeln!(s, "  fold {{");
        let _ = writeln!(s, "    angle_deg = {}", num(f.angle_deg));
        let _ = writeln!(s, "    offset_cm = {}", num(f.offset));
        let _ = writeln!(s, "    start_cm = {}", num(f.start));
        let _ = writeln!(s, "    length_cm = {}", num(f.length));
        let _ = writeln!(s, "    bend_deg = {}", num(f.bend_deg));
        let _ = writeln!(s, "    bend_length_cm = {}", num(f.bend_length));
        let _ = writeln!(s, "    ridge_width_cm = {}", num(f.ridge_width));
        let _ = writeln!(s, "    ridge_height_cm = {}", num(f.ridge_height));
        let _ = writeln!(s, "    crease_width_cm = {}", num(f.crease_width));
        let _ = writeln!(s, "    crease_albedo = {}", num(f.crease_albedo));
        let _ = writeln!(s, "    exempt = {}", f.exempt);
        let _ = writeln!(s, "  }}");
    }
    for st in &r.strokes {
        let pts: Vec<String> = st.points.iter().map(|p| list(&[p.x, p.y])).collect();
        let _ = writeln!(s, "  stroke {{");
        let _ = writeln!(s, "    points_cm = [{}]", pts.join(", "));
        let _ = writeln!(s, "    width_cm = {}", num(st.width));
        let _ = writeln!(s, "    albedo = {}", rgb(st.albedo));
        let _ = writeln!(s, "  }}");
    }
    let _ = writeln!(s, "}}\n");

    for m in &cfg.meshes {
        let _ = writeln!(s, "mesh {{");
        let _ = writeln!(s, "  path = {}", quote(&m.path));
        let _ = writeln!(s, "  translate_cm = {}", v3(m.translate));
        let _ = writeln!(s, "  scale = {}", num(m.scale));
        let _ = writeln!(s, "  albedo = {}", rgb(m.albedo));
        let _ = writeln!(s, "}}\n");
    }

    let rs = &cfg.render;
    let _ = writeln!(s, "render {{");
    let _ = writeln!(s, "  spp = {}", rs.samples_per_pixel);
    let _ = writeln!(s, "  max_depth = {}", rs.max_depth);
    let _ = writeln!(s, "  seed = {}", rs.seed);
    let _ = writeln!(s, "  gamma = {}", num(rs.gamma));
    let _ = writeln!(s, "  strict = {}", rs.strict);
    if let Some(c) = rs.crop {
        let _ = writeln!(s, "  crop = [{}, {}, {}, {}]", c.x0, c.y0, c.x1, c.y1);
    }
    let _ = writeln!(s, "}}");
    s
}

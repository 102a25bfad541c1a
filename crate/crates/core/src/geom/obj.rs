//! Wavefront OBJ subset: `v`, `vt` and `f` records. Polygons are fan
//! triangulated; normals, groups and materials are ignored.

use std::collections::HashMap;
use std::path::Path;

use super::mesh::MeshPrimitive;
use super::vector::{Vec2, Vec3};
use super::GeomError;

pub fn load_obj(path: &Path) -> Result<MeshPrimitive, GeomError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Obj(format!("{}: {e}", path.display())))?;
    parse_obj(&text)
}

/// Resolves a 1-based (or negative, relative) OBJ index.
fn resolve(raw: &str, len: usize, line: usize) -> Result<usize, GeomError> {
    let i: i64 = raw
        .parse()
        .map_err(|_| GeomError::Obj(format!("line {line}: bad index '{raw}'")))?;
    let idx = if i > 0 {
        i - 1
    } else if i < 0 {
        len as i64 + i
    } else {
        -1
    };
    if idx < 0 || idx as usize >= len {
        return Err(GeomError::Obj(format!("line {line}: index {i} out of range")));
    }
    Ok(idx as usize)
}

pub fn parse_obj(text: &str) -> Result<MeshPrimitive, GeomError> {
    let mut positions = Vec::new();
    let mut texcoords = Vec::new();
    // (position, texcoord) pairs are split into distinct output vertices so
    // UVs can stay per-vertex.
    let mut remap: HashMap<(usize, Option<usize>), u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut uvs = Vec::new();
    let mut triangles = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut fields = content.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let nums = |fields: std::str::SplitWhitespace<'_>, want: usize| -> Result<Vec<f64>, GeomError> {
            let v: Result<Vec<f64>, _> = fields.take(want).map(str::parse).collect();
            let v = v.map_err(|_| GeomError::Obj(format!("line {line}: bad number")))?;
            if v.len() < want.min(2) {
                return Err(GeomError::Obj(format!("line {line}: too few components")));
            }
            Ok(v)
        };
        match tag {
            "v" => {
                let c = nums(fields, 3)?;
                if c.len() < 3 {
                    return Err(GeomError::Obj(format!("line {line}: vertex needs 3 components")));
                }
                positions.push(Vec3::new(c[0], c[1], c[2]));
            }
            "vt" => {
                let c = nums(fields, 2)?;
                texcoords.push(Vec2::new(c[0], c[1]));
            }
            "f" => {
                let mut face = Vec::new();
                for corner in fields {
                    let mut parts = corner.split('/');
                    let p = resolve(parts.next().unwrap_or(""), positions.len(), line)?;
                    let t = match parts.next() {
                        Some(s) if !s.is_empty() => Some(resolve(s, texcoords.len(), line)?),
                        _ => None,
                    };
                    let id = *remap.entry((p, t)).or_insert_with(|| {
                        vertices.push(positions[p]);
                        uvs.push(t.map_or(Vec2::ZERO, |t| texcoords[t]));
                        (vertices.len() - 1) as u32
                    });
                    face.push(id);
                }
                if face.len() < 3 {
                    return Err(GeomError::Obj(format!("line {line}: face with fewer than 3 vertices")));
                }
                for k in 1..face.len() - 1 {
                    triangles.push([face[0], face[k], face[k + 1]]);
                }
            }
            _ => {}
        }
    }
    MeshPrimitive::new(vertices, triangles, uvs)
}

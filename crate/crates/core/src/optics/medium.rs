use crate::geom::PrimitiveId;

use super::OpticsError;

/// Identifier of a participating medium. `AIR` is the ambient medium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MediumId(pub u32);

impl MediumId {
    pub const AIR: MediumId = MediumId(0);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    pub id: MediumId,
    pub ior: f64,
}

const MAX_NESTING: usize = 8;

/// The media enclosing the current ray origin, innermost on top. The
/// ambient air entry at the bottom is never popped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumStack {
    entries: [Medium; MAX_NESTING],
    len: usize,
}

impl Default for MediumStack {
    fn default() -> Self {
        MediumStack::new()
    }
}

impl MediumStack {
    pub fn new() -> Self {
        let air = Medium {
            id: MediumId::AIR,
            ior: 1.0,
        };
        MediumStack {
            entries: [air; MAX_NESTING],
            len: 1,
        }
    }

    pub fn depth(&self) -> usize {
        self.len
    }

    pub fn top(&self) -> Medium {
        self.entries[self.len - 1]
    }

    /// Medium the ray would be in after leaving the top one.
    pub fn below_top(&self) -> Option<Medium> {
        (self.len >= 2).then(|| self.entries[self.len - 2])
    }

    pub fn push(&mut self, medium: Medium, primitive: PrimitiveId) -> Result<(), OpticsError> {
        if self.len == MAX_NESTING {
            return Err(OpticsError::StackOverflow { primitive });
        }
        self.entries[self.len] = medium;
        self.len += 1;
        Ok(())
    }

    /// Leaves `medium`, which must be the innermost one.
    pub fn pop(&mut self, medium: MediumId, primitive: PrimitiveId) -> Result<Medium, OpticsError> {
        if self.len < 2 || self.top().id != medium {
            return Err(OpticsError::StackUnderflow {
                primitive,
                expected: medium,
                found: self.top().id,
            });
        }
        self.len -= 1;
        Ok(self.entries[self.len])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Medium> {
        self.entries[..self.len].iter()
    }
}

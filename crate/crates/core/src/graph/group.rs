//! Vertex groups: finite groups given by multiplication tables, and abstract
//! labels that only carry classification flags.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted for a concrete table.
pub const MAX_ORDER: usize = 256;

/// Yes / no / unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    #[default]
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

/// A finite group on the element indices `0..order`, identity at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
}

impl FiniteGroup {
    /// The cyclic group `Z_k`, element `i` standing for `i mod k`.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidTable(format!("cyclic order {k} < 2")));
        }
        let rows: Vec<Vec<usize>> = (0..k)
            .map(|a| (0..k).map(|b| (a + b) % k).collect())
            .collect();
        Self::from_table(&rows)
    }

    /// Direct product `G x H`; element `(g, h)` gets index `g * |H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (m, n) = (g.order, h.order);
        let mut rows = vec![vec![0usize; m * n]; m * n];
        for (x, row) in rows.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = g.mul(x / n, y / n) * n + h.mul(x % n, y % n);
            }
        }
        Self::from_table(&rows)
    }

    /// Validates a full multiplication table: square, entries in range,
    /// identity at index 0, every row and column a permutation, associative.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let k = rows.len();
        if k > MAX_ORDER {
            return Err(Error::InvalidTable(format!("order {k} above {MAX_ORDER}")));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= k) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        for (a, row) in rows.iter().enumerate() {
            if rows[0][a] != a || row[0] != a {
                return Err(Error::InvalidTable("index 0 is not the identity".into()));
            }
        }
        let mut table = vec![0u16; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = rows[a][b] as u16;
            }
        }
        for a in 0..k {
            for b in 0..k {
                let ab = table[a * k + b] as usize;
                for c in 0..k {
                    let bc = table[b * k + c] as usize;
                    if table[ab * k + c] != table[a * k + bc] {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..k {
            let mut seen_row = vec![false; k];
            let mut seen_col = vec![false; k];
            for b in 0..k {
                seen_row[table[a * k + b] as usize] = true;
                seen_col[table[b * k + a] as usize] = true;
            }
            if seen_row.iter().chain(&seen_col).any(|s| !s) {
                return Err(Error::InvalidTable("not a latin square".into()));
            }
        }
        let mut inverse = vec![0u16; k];
        for a in 0..k {
            inverse[a] = (0..k).find(|&b| table[a * k + b] == 0).unwrap() as u16;
        }
        Ok(FiniteGroup {
            order: k,
            table,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }
}

/// Order of an abstract vertex group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(usize),
    Infinite,
}

/// A vertex group known only through its order and classification flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractGroup {
    pub order: GroupOrder,
    pub hyperbolic: Tri,
    pub virtually_infinite_cyclic: Tri,
    pub virtual_surface: Tri,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexGroup {
    Concrete(FiniteGroup),
    Abstract(AbstractGroup),
}

impl VertexGroup {
    pub fn cyclic(k: usize) -> Result<Self> {
        FiniteGroup::cyclic(k).map(VertexGroup::Concrete)
    }

    /// Abstract infinite group with the given flags.
    pub fn infinite(hyperbolic: Tri, virtually_infinite_cyclic: Tri, virtual_surface: Tri) -> Self {
        VertexGroup::Abstract(AbstractGroup {
            order: GroupOrder::Infinite,
            hyperbolic,
            virtually_infinite_cyclic,
            virtual_surface,
        })
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<usize> {
        match self {
            VertexGroup::Concrete(g) => Some(g.order()),
            VertexGroup::Abstract(a) => match a.order {
                GroupOrder::Finite(k) => Some(k),
                GroupOrder::Infinite => None,
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Every group of order two is `Z_2`, so abstract order-2 labels count too.
    pub fn is_z2(&self) -> bool {
        self.order() == Some(2)
    }

    pub fn concrete(&self) -> Option<&FiniteGroup> {
        match self {
            VertexGroup::Concrete(g) => Some(g),
            VertexGroup::Abstract(_) => None,
        }
    }

    pub fn hyperbolic(&self) -> Tri {
        match self {
            VertexGroup::Abstract(a) if a.order == GroupOrder::Infinite => a.hyperbolic,
            _ => Tri::Yes,
        }
    }

    pub fn virtually_infinite_cyclic(&self) -> Tri {
        match self {
            VertexGroup::Abstract(a) if a.order == GroupOrder::Infinite => {
                a.virtually_infinite_cyclic
            }
            _ => Tri::No,
        }
    }

    pub fn virtual_surface(&self) -> Tri {
        match self {
            VertexGroup::Abstract(a) if a.order == GroupOrder::Infinite => a.virtual_surface,
            _ => Tri::No,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            VertexGroup::Concrete(g) => format!("table({})", g.order()),
            VertexGroup::Abstract(a) => match a.order {
                GroupOrder::Finite(k) => format!("abstract({k})"),
                GroupOrder::Infinite => "abstract(inf)".into(),
            },
        }
    }
}

//! Grassmann polynomials over the scalar kernel.

mod function;
mod matrix;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use crate::error::{Error, Result};

pub use function::SuperFunction;
pub use matrix::{GradedMatrix, ScalarMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bits(n: u32) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// (-1)^(self*other) as an `i64`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bits(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Geometric role of a coordinate in a bundle chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// q
    BaseEven,
    /// θ
    BaseOdd,
    /// v
    Velocity,
    /// ζ
    OddVelocity,
    /// πv, odd
    PiVelocity,
    /// πζ, even
    PiOddVelocity,
    /// p
    Momentum,
    /// η
    OddMomentum,
    /// πp, odd
    PiMomentum,
    /// πη, even
    PiOddMomentum,
}

impl Role {
    pub fn parity(self) -> Parity {
        match self {
            Role::BaseEven
            | Role::Velocity
            | Role::PiOddVelocity
            | Role::Momentum
            | Role::PiOddMomentum => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// Image under the parity-change functor, if it is a chart role.
    pub fn pi(self) -> Option<Role> {
        Some(match self {
            Role::Velocity => Role::PiVelocity,
            Role::PiVelocity => Role::Velocity,
            Role::OddVelocity => Role::PiOddVelocity,
            Role::PiOddVelocity => Role::OddVelocity,
            Role::Momentum => Role::PiMomentum,
            Role::PiMomentum => Role::Momentum,
            Role::OddMomentum => Role::PiOddMomentum,
            Role::PiOddMomentum => Role::OddMomentum,
            Role::BaseEven | Role::BaseOdd => return None,
        })
    }

    pub fn is_base(self) -> bool {
        matches!(self, Role::BaseEven | Role::BaseOdd)
    }

    /// Default name prefix for fiber coordinates.
    pub fn prefix(self) -> &'static str {
        match self {
            Role::BaseEven => "q",
            Role::BaseOdd => "th",
            Role::Velocity => "v",
            Role::OddVelocity => "z",
            Role::PiVelocity => "pv",
            Role::PiOddVelocity => "pz",
            Role::Momentum => "p",
            Role::OddMomentum => "eta",
            Role::PiMomentum => "pp",
            Role::PiOddMomentum => "peta",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Role::BaseEven => "q",
            Role::BaseOdd => "θ",
            Role::Velocity => "v",
            Role::OddVelocity => "ζ",
            Role::PiVelocity => "πv",
            Role::PiOddVelocity => "πζ",
            Role::Momentum => "p",
            Role::OddMomentum => "η",
            Role::PiMomentum => "πp",
            Role::PiOddMomentum => "πη",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub name: Arc<str>,
    pub parity: Parity,
    pub role: Role,
    /// 1-based position among the coordinates of the same role.
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChartKind {
    Base,
    TangentSuper,
    Tangent,
    CotangentSuper,
    Cotangent,
    /// The (q, πη | θ, πp) sector of the super cotangent bundle.
    OddSector,
    Custom,
}

impl ChartKind {
    pub fn name(self) -> &'static str {
        match self {
            ChartKind::Base => "base",
            ChartKind::TangentSuper => "tangent-super",
            ChartKind::Tangent => "tangent",
            ChartKind::CotangentSuper => "cotangent-super",
            ChartKind::Cotangent => "cotangent",
            ChartKind::OddSector => "odd-sector",
            ChartKind::Custom => "custom",
        }
    }
}

/// Ordered coordinates of a chart. Odd coordinates are numbered in chart
/// order; that numbering is the bit layout of odd monomials.
#[derive(Clone, Debug)]
pub struct CoordinateSystem {
    kind: ChartKind,
    coords: Vec<Coordinate>,
    odd_bit: Vec<Option<u32>>,
    odd_coords: Vec<usize>,
    by_name: BTreeMap<Arc<str>, usize>,
}

/// Shared handle to a coordinate system.
pub type Chart = Arc<CoordinateSystem>;

impl PartialEq for CoordinateSystem {
    fn eq(&self, other: &Self) -> bool {
        core::ptr::eq(self, other) || (self.kind == other.kind && self.coords == other.coords)
    }
}

impl Eq for CoordinateSystem {}

impl CoordinateSystem {
    pub fn new(kind: ChartKind, coords: Vec<Coordinate>) -> Result<CoordinateSystem> {
        let mut by_name = BTreeMap::new();
        let mut odd_bit = Vec::with_capacity(coords.len());
        let mut odd_coords = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            if by_name.insert(c.name.clone(), i).is_some() {
                return Err(Error::DuplicateCoordinate(String::from(&*c.name)));
            }
            if c.parity.is_odd() {
                odd_bit.push(Some(odd_coords.len() as u32));
                odd_coords.push(i);
            } else {
                odd_bit.push(None);
            }
        }
        if odd_coords.len() > 64 {
            return Err(Error::TooManyOddCoordinates(odd_coords.len()));
        }
        Ok(CoordinateSystem {
            kind,
            coords,
            odd_bit,
            odd_coords,
            by_name,
        })
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, i: usize) -> &Coordinate {
        &self.coords[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.coords[i].name
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.coords[i].parity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownCoordinate(String::from(name)))
    }

    pub fn odd_bit(&self, i: usize) -> Option<u32> {
        self.odd_bit[i]
    }

    pub fn odd_count(&self) -> usize {
        self.odd_coords.len()
    }

    /// Chart index of the odd coordinate with the given bit.
    pub fn odd_coord(&self, bit: u32) -> usize {
        self.odd_coords[bit as usize]
    }

    pub fn even_names(&self) -> impl Iterator<Item = &str> {
        self.coords
            .iter()
            .filter(|c| !c.parity.is_odd())
            .map(|c| &*c.name)
    }

    /// Chart indices of all coordinates with the given role, by role index.
    pub fn with_role(&self, role: Role) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.coords.len())
            .filter(|&i| self.coords[i].role == role)
            .collect();
        v.sort_by_key(|&i| self.coords[i].index);
        v
    }

    pub fn find_role(&self, role: Role, index: usize) -> Option<usize> {
        self.coords
            .iter()
            .position(|c| c.role == role && c.index == index)
    }

    /// Base dimensions (m, n).
    pub fn base_dims(&self) -> (usize, usize) {
        let m = self.coords.iter().filter(|c| c.role == Role::BaseEven).count();
        let n = self.coords.iter().filter(|c| c.role == Role::BaseOdd).count();
        (m, n)
    }

    /// Super dimension (even count, odd count).
    pub fn dims(&self) -> (usize, usize) {
        (self.coords.len() - self.odd_coords.len(), self.odd_coords.len())
    }

    pub fn describe(&self) -> String {
        let mut s = String::from(self.kind.name());
        s.push('[');
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&c.name);
        }
        s.push(']');
        s
    }

    pub(crate) fn ensure_same(&self, other: &CoordinateSystem) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected: self.describe(),
                found: other.describe(),
            })
        }
    }
}

impl fmt::Display for CoordinateSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

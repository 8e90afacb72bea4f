use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// One of the two independent variables; also names the derivation `∂_x` / `∂_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// A derivative `∂_x^dx ∂_y^dy func` of an unknown function, e.g. `r_xxy`.
///
/// Ordered by function name, then total derivative order, then `dx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetSymbol {
    func: Arc<str>,
    dx: u32,
    dy: u32,
}

impl JetSymbol {
    pub fn new(func: impl Into<Arc<str>>, dx: u32, dy: u32) -> Self {
        JetSymbol {
            func: func.into(),
            dx,
            dy,
        }
    }

    /// The underived function itself.
    pub fn base(func: impl Into<Arc<str>>) -> Self {
        Self::new(func, 0, 0)
    }

    pub fn func(&self) -> &str {
        &self.func
    }

    pub fn dx_order(&self) -> u32 {
        self.dx
    }

    pub fn dy_order(&self) -> u32 {
        self.dy
    }

    pub fn order(&self) -> u32 {
        self.dx + self.dy
    }

    pub fn derive(&self, axis: Axis) -> JetSymbol {
        let (dx, dy) = match axis {
            Axis::X => (self.dx + 1, self.dy),
            Axis::Y => (self.dx, self.dy + 1),
        };
        JetSymbol {
            func: self.func.clone(),
            dx,
            dy,
        }
    }

    /// True when `other` is obtained from `self` by zero or more derivations.
    pub fn divides(&self, other: &JetSymbol) -> bool {
        self.func == other.func && self.dx <= other.dx && self.dy <= other.dy
    }

    pub fn same_func(&self, other: &JetSymbol) -> bool {
        self.func == other.func
    }
}

impl Ord for JetSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.func
            .cmp(&other.func)
            .then(self.order().cmp(&other.order()))
            .then(self.dx.cmp(&other.dx))
    }
}

impl PartialOrd for JetSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JetSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.func)?;
        if self.order() > 0 {
            f.write_str("_")?;
            for _ in 0..self.dx {
                f.write_str("x")?;
            }
            for _ in 0..self.dy {
                f.write_str("y")?;
            }
        }
        Ok(())
    }
}

/// A polynomial indeterminate: `x`, `y`, or a jet symbol.
///
/// The derived order (`X < Y < Jet`) also fixes variable priority in the
/// lexicographic monomial order: smaller variables are more significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Jet(JetSymbol),
}

impl Var {
    pub fn jet(func: &str, dx: u32, dy: u32) -> Var {
        Var::Jet(JetSymbol::new(func, dx, dy))
    }

    pub fn as_jet(&self) -> Option<&JetSymbol> {
        match self {
            Var::Jet(j) => Some(j),
            _ => None,
        }
    }
}

impl From<Axis> for Var {
    fn from(a: Axis) -> Var {
        match a {
            Axis::X => Var::X,
            Axis::Y => Var::Y,
        }
    }
}

impl From<JetSymbol> for Var {
    fn from(j: JetSymbol) -> Var {
        Var::Jet(j)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => f.write_str("x"),
            Var::Y => f.write_str("y"),
            Var::Jet(j) => j.fmt(f),
        }
    }
}

use std::fmt;

use serde::Serialize;

/// A color that travels on a channel. Two bits suffice to encode it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Green,
    Red,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::White, Color::Green, Color::Red];

    /// Wire encoding; `0b00` is unused.
    pub fn to_bits(self) -> u8 {
        match self {
            Color::White => 0b01,
            Color::Green => 0b10,
            Color::Red => 0b11,
        }
    }

    pub fn from_bits(bits: u8) -> Option<Color> {
        match bits {
            0b01 => Some(Color::White),
            0b10 => Some(Color::Green),
            0b11 => Some(Color::Red),
            _ => None,
        }
    }
}

/// The state of a node: uncolored, one of the three colors, or clashed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeColor {
    #[default]
    None,
    White,
    Green,
    Red,
    Clash,
}

impl NodeColor {
    pub const ALL: [NodeColor; 5] =
        [NodeColor::None, NodeColor::White, NodeColor::Green, NodeColor::Red, NodeColor::Clash];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeColor::None => "none",
            NodeColor::White => "white",
            NodeColor::Green => "green",
            NodeColor::Red => "red",
            NodeColor::Clash => "clash",
        }
    }

    /// The color this node would transmit, if it has one.
    pub fn as_color(self) -> Option<Color> {
        match self {
            NodeColor::White => Some(Color::White),
            NodeColor::Green => Some(Color::Green),
            NodeColor::Red => Some(Color::Red),
            NodeColor::None | NodeColor::Clash => None,
        }
    }
}

impl From<Color> for NodeColor {
    fn from(c: Color) -> Self {
        match c {
            Color::White => NodeColor::White,
            Color::Green => NodeColor::Green,
            Color::Red => NodeColor::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(NodeColor::from(*self).as_str())
    }
}

impl fmt::Display for NodeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The color update grammar: `(current color, received color) -> new color`.
///
/// Uncolored nodes adopt whatever they receive, white yields to green or red,
/// green and red persist against white and against themselves, and green
/// meeting red is a clash. A clashed node stays clashed.
pub fn apply_cug(current: NodeColor, received: Color) -> NodeColor {
    use NodeColor as N;
    match (current, received) {
        (N::None, c) => c.into(),
        (N::White, c) => c.into(),
        (N::Green, Color::White | Color::Green) => N::Green,
        (N::Red, Color::White | Color::Red) => N::Red,
        (N::Green, Color::Red) | (N::Red, Color::Green) => N::Clash,
        (N::Clash, _) => N::Clash,
    }
}

//! Antenna placement geometry: movement regions, minimum-distance
//! feasibility, closed-form projections, and grid initialization.
//!
//! All feasibility comparisons are exact (`>=` with no epsilon); layouts
//! produced by this module satisfy their constraints by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2D antenna coordinate, in the same length unit as the carrier wavelength
/// (wavelengths when `wavelength = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Position {
        Position::new(self.x + dx, self.y + dy)
    }
}

/// Bounded 2D region an antenna may move in.
///
/// Coordinates are conventionally centered at the origin so that the phase
/// reference of the field-response model coincides with the region center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Region {
    Rectangle {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
    Circle {
        center: Position,
        radius: f64,
    },
}

impl Region {
    /// Square of the given side length centered at the origin.
    pub fn square(side: f64) -> Self {
        let half = side / 2.0;
        Region::Rectangle {
            x_lo: -half,
            x_hi: half,
            y_lo: -half,
            y_hi: half,
        }
    }

    pub fn center(&self) -> Position {
        match *self {
            Region::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => Position::new((x_lo + x_hi) / 2.0, (y_lo + y_hi) / 2.0),
            Region::Circle { center, .. } => center,
        }
    }

    /// Exact membership test, boundary included.
    pub fn contains(&self, p: Position) -> bool {
        match *self {
            Region::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi,
            Region::Circle { center, radius } => p.distance(&center) <= radius,
        }
    }

    /// Euclidean projection onto the region.
    ///
    /// Rectangles clamp component-wise; circles rescale the offset from the
    /// center to the radius. Interior points are returned unchanged.
    pub fn project(&self, p: Position) -> Position {
        match *self {
            Region::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => Position::new(p.x.clamp(x_lo, x_hi), p.y.clamp(y_lo, y_hi)),
            Region::Circle { center, radius } => {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                let norm = (dx * dx + dy * dy).sqrt();
                if norm <= radius {
                    p
                } else {
                    let scale = radius / norm;
                    Position::new(center.x + scale * dx, center.y + scale * dy)
                }
            }
        }
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Region {
        match *self {
            Region::Rectangle {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => Region::Rectangle {
                x_lo: x_lo + dx,
                x_hi: x_hi + dx,
                y_lo: y_lo + dy,
                y_hi: y_hi + dy,
            },
            Region::Circle { center, radius } => Region::Circle {
                center: center.translate(dx, dy),
                radius,
            },
        }
    }
}

/// Ordered antenna positions together with the mutual-coupling spacing they
/// must respect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaLayout {
    pub positions: Vec<Position>,
    pub min_distance: f64,
}

impl AntennaLayout {
    pub fn new(positions: Vec<Position>, min_distance: f64) -> Self {
        Self {
            positions,
            min_distance,
        }
    }

    pub fn count(&self) -> usize {
        self.positions.len()
    }

    /// Smallest pairwise distance, or `None` for fewer than two antennas.
    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.positions.iter().enumerate() {
            for b in &self.positions[i + 1..] {
                let d = a.distance(b);
                best = Some(best.map_or(d, |m| m.min(d)));
            }
        }
        best
    }
}

/// True iff every antenna lies inside `region` and every pair is at least
/// `layout.min_distance` apart. Comparisons are exact, no slack.
pub fn is_feasible(layout: &AntennaLayout, region: &Region) -> bool {
    if !layout.positions.iter().all(|&p| region.contains(p)) {
        return false;
    }
    for (i, a) in layout.positions.iter().enumerate() {
        for b in &layout.positions[i + 1..] {
            if a.distance(b) < layout.min_distance {
                return false;
            }
        }
    }
    true
}

/// Deterministic well-separated initial placement.
///
/// Places antennas at the cell centers of a uniform g x g grid spanning the
/// region (g = ceil(sqrt(count))), taking the first `count` cells in
/// row-major order. A circle region uses its inscribed square. Errors when
/// the cell pitch would put neighboring antennas closer than `min_distance`.
pub fn circle_packing_init(
    count: usize,
    region: &Region,
    min_distance: f64,
) -> Result<AntennaLayout> {
    if count == 0 {
        return Err(Error::Config("antenna count must be at least 1".into()));
    }
    let grid = (count as f64).sqrt().ceil() as usize;
    let (x_lo, y_lo, pitch_x, pitch_y) = match *region {
        Region::Rectangle {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        } => (
            x_lo,
            y_lo,
            (x_hi - x_lo) / grid as f64,
            (y_hi - y_lo) / grid as f64,
        ),
        Region::Circle { center, radius } => {
            let side = radius * std::f64::consts::SQRT_2;
            let pitch = side / grid as f64;
            (center.x - side / 2.0, center.y - side / 2.0, pitch, pitch)
        }
    };
    if count > 1 && (pitch_x < min_distance || pitch_y < min_distance) {
        return Err(Error::InfeasibleRegion {
            count,
            min_distance,
            reason: format!(
                "grid pitch {:.6} x {:.6} is below the minimum antenna distance",
                pitch_x, pitch_y
            ),
        });
    }
    let mut positions = Vec::with_capacity(count);
    'rows: for i in 0..grid {
        for j in 0..grid {
            if positions.len() == count {
                break 'rows;
            }
            positions.push(Position::new(
                x_lo + (j as f64 + 0.5) * pitch_x,
                y_lo + (i as f64 + 0.5) * pitch_y,
            ));
        }
    }
    let layout = AntennaLayout::new(positions, min_distance);
    debug_assert!(is_feasible(&layout, region));
    Ok(layout)
}

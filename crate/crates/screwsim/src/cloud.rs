//! Labeled 3D point clouds, the synthetic stand-in for color-segmented
//! RGB-D output. Label 0 is background; labels ≥ 1 identify screws.

use serde::{Deserialize, Serialize};

use crate::geom::Vec3;
use crate::scalar::Real;

pub const BACKGROUND_LABEL: u32 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint<T = f64> {
    pub position: Vec3<T>,
    pub label: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LabeledCloud<T = f64> {
    pub points: Vec<LabeledPoint<T>>,
}

impl<T: Real> LabeledCloud<T> {
    pub fn new() -> Self {
        LabeledCloud { points: Vec::new() }
    }

    pub fn push(&mut self, position: Vec3<T>, label: u32) {
        self.points.push(LabeledPoint { position, label });
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Labels present in the cloud, excluding background.
    pub fn screw_labels(&self) -> Vec<u32> {
        let mut labels: Vec<u32> = self
            .points
            .iter()
            .map(|p| p.label)
            .filter(|&l| l != BACKGROUND_LABEL)
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }
}

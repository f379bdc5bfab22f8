use std::collections::{HashMap, VecDeque};

use super::descriptor::GroupDescriptor;
use super::element::GroupElement;
use crate::error::{Error, Result};

pub const DEFAULT_BALL_CAP: usize = 10_000_000;

/// The ball `B(e, r)` with exact distances, in BFS order.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: u64,
    pub elements: Vec<(GroupElement, u64)>,
    index: HashMap<GroupElement, u64>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn distance(&self, x: &GroupElement) -> Option<u64> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.index.contains_key(x)
    }

    /// Number of elements at each exact distance `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius as usize + 1];
        for (_, d) in &self.elements {
            out[*d as usize] += 1;
        }
        out
    }
}

/// Breadth-first enumeration of `B(e, r)` over the descriptor's generators.
pub fn ball_enumerate(desc: &GroupDescriptor, r: u64, cap: usize) -> Result<Ball> {
    let gens = desc.generators();
    let id = desc.identity();
    let mut index = HashMap::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(id.clone(), 0);
    elements.push((id.clone(), 0));
    queue.push_back((id, 0u64));
    while let Some((x, d)) = queue.pop_front() {
        if d == r {
            continue;
        }
        for s in &gens {
            let y = desc.multiply(&x, s)?;
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(Error::Resource {
                        what: "ball enumeration",
                        requested: elements.len() + 1,
                        cap,
                    });
                }
                index.insert(y.clone(), d + 1);
                elements.push((y.clone(), d + 1));
                queue.push_back((y, d + 1));
            }
        }
    }
    Ok(Ball {
        radius: r,
        elements,
        index,
    })
}

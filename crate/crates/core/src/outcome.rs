use crate::graph::EdgeId;

/// Result of solving an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    NoTour,
    /// `edges` are sorted input-graph edge ids.
    Tour { cost: u64, edges: Vec<EdgeId> },
}

impl Outcome {
    pub fn cost(&self) -> Option<u64> {
        match self {
            Outcome::NoTour => None,
            Outcome::Tour { cost, .. } => Some(*cost),
        }
    }

    /// The cheaper of the two; `self` wins ties.
    pub fn min(self, other: Outcome) -> Outcome {
        match (self.cost(), other.cost()) {
            (_, None) => self,
            (None, Some(_)) => other,
            (Some(a), Some(b)) if b < a => other,
            _ => self,
        }
    }
}

//! Illicit-actor timelines: which time steps each illicit address is active
//! in, how many transactions per step, and the 1 / 2–4 / ≥5 step-count bins.

use crate::domain::{Address, ClassLabel, TimeStep};
use std::collections::BTreeMap;

/// Step-count bucket of an actor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepCountBin {
    One,
    TwoToFour,
    FiveOrMore,
}

impl StepCountBin {
    pub fn of(active_steps: usize) -> StepCountBin {
        match active_steps {
            0 | 1 => StepCountBin::One,
            2..=4 => StepCountBin::TwoToFour,
            _ => StepCountBin::FiveOrMore,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StepCountBin::One => "1",
            StepCountBin::TwoToFour => "2-4",
            StepCountBin::FiveOrMore => ">=5",
        }
    }
}

/// Timeline of one illicit actor.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorTimeline {
    pub address: Address,
    /// Transactions per active step, ascending by step.
    pub tx_counts: Vec<(TimeStep, u64)>,
    pub bin: StepCountBin,
}

/// Per-step, per-bin actor counts plus one timeline per illicit actor.
#[derive(Debug, Clone, PartialEq)]
pub struct IllicitActorReport {
    pub actors: Vec<ActorTimeline>,
    /// distribution[bin][step] = number of illicit actors in that bin whose
    /// activity touches that step.
    pub distribution: BTreeMap<StepCountBin, BTreeMap<u32, u64>>,
}

/// Builds the illicit-actor timeline report from per-(address, step)
/// occurrence counts and the address labels. Only illicit addresses are
/// included.
pub fn illicit_actor_timeline(
    occurrences: &[(Address, TimeStep, u64)],
    classes: &BTreeMap<Address, ClassLabel>,
) -> IllicitActorReport {
    let mut per_actor: BTreeMap<&Address, BTreeMap<TimeStep, u64>> = BTreeMap::new();
    for (addr, step, count) in occurrences {
        if classes.get(addr) == Some(&ClassLabel::Illicit) {
            *per_actor.entry(addr).or_default().entry(*step).or_insert(0) += count;
        }
    }
    let mut actors = Vec::with_capacity(per_actor.len());
    let mut distribution: BTreeMap<StepCountBin, BTreeMap<u32, u64>> = BTreeMap::new();
    for (addr, steps) in per_actor {
        let bin = StepCountBin::of(steps.len());
        for step in steps.keys() {
            *distribution
                .entry(bin)
                .or_default()
                .entry(step.index())
                .or_insert(0) += 1;
        }
        actors.push(ActorTimeline {
            address: addr.clone(),
            tx_counts: steps.into_iter().collect(),
            bin,
        });
    }
    IllicitActorReport {
        actors,
        distribution,
    }
}

//! Sequential-decision view of a QAP instance.
//!
//! An episode makes 2n alternating choices: pick an empty location, then pick
//! an unplaced facility for it, until every location is filled. Placing a
//! facility incurs the pairwise transport cost against every facility placed
//! so far; location picks are free. Summed over a complete episode these
//! increments reproduce the assignment objective exactly, which is the
//! load-bearing property of this module (see tests/decomposition.rs).

use qapforge_core::{Assignment, QapInstance};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MdpError {
    #[error("state is terminal; no further actions exist")]
    TerminalState,
    #[error("state is not terminal (t = {t} of {expected})")]
    NonTerminal { t: usize, expected: usize },
    #[error("action {index} is not allowed in this state")]
    IllegalAction { index: usize },
}

pub type Result<T> = std::result::Result<T, MdpError>;

/// Which side of the assignment the current step selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    LocationSelect,
    FacilitySelect,
}

impl Role {
    /// Steps alternate: even t picks a location, odd t picks a facility.
    pub fn at_step(t: usize) -> Role {
        if t % 2 == 0 {
            Role::LocationSelect
        } else {
            Role::FacilitySelect
        }
    }
}

/// Boolean action filter for one step.
#[derive(Clone, Debug)]
pub struct ActionMask {
    pub role: Role,
    pub allowed: Vec<bool>,
}

impl ActionMask {
    pub fn allowed_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.allowed
            .iter()
            .enumerate()
            .filter_map(|(i, &ok)| ok.then_some(i))
    }

    pub fn count_allowed(&self) -> usize {
        self.allowed.iter().filter(|&&ok| ok).count()
    }
}

/// Immutable episode state: the alternating prefix of selected indices plus
/// the used-index masks. `step` returns a new state.
#[derive(Clone, Debug)]
pub struct MdpState<'a> {
    instance: &'a QapInstance,
    sequence: Vec<usize>,
    location_used: Vec<bool>,
    facility_used: Vec<bool>,
}

impl<'a> MdpState<'a> {
    pub fn initial(instance: &'a QapInstance) -> Self {
        let n = instance.n();
        Self {
            instance,
            sequence: Vec::with_capacity(2 * n),
            location_used: vec![false; n],
            facility_used: vec![false; n],
        }
    }

    pub fn instance(&self) -> &'a QapInstance {
        self.instance
    }

    /// Number of selections made so far (0 to 2n).
    pub fn t(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.t() == 2 * self.instance.n()
    }

    /// The alternating selection prefix; element 2p is a location, 2p+1 a facility.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn legal_actions(&self) -> Result<ActionMask> {
        if self.is_terminal() {
            return Err(MdpError::TerminalState);
        }
        let role = Role::at_step(self.t());
        let used = match role {
            Role::LocationSelect => &self.location_used,
            Role::FacilitySelect => &self.facility_used,
        };
        Ok(ActionMask {
            role,
            allowed: used.iter().map(|&u| !u).collect(),
        })
    }

    /// Apply `action`, returning the successor state and the incremental cost:
    /// zero for a location pick, and for a facility pick the summed pairwise
    /// transport cost against all previously placed facilities. Symmetry of
    /// the flow and distance matrices folds the two directed terms of each
    /// pair into a single doubled product.
    pub fn step(&self, action: usize) -> Result<(MdpState<'a>, f64)> {
        let mask = self.legal_actions()?;
        if action >= mask.allowed.len() || !mask.allowed[action] {
            return Err(MdpError::IllegalAction { index: action });
        }
        let t = self.t();
        let cost = if t % 2 == 0 {
            0.0
        } else {
            let flows = self.instance.flows();
            let distances = self.instance.distances();
            let loc = self.sequence[t - 1];
            let mut c = 0.0;
            for p in 0..(t - 1) / 2 {
                let prior_loc = self.sequence[2 * p];
                let prior_fac = self.sequence[2 * p + 1];
                c += 2.0 * flows[(prior_fac, action)] * distances[(prior_loc, loc)];
            }
            c
        };
        let mut next = self.clone();
        next.sequence.push(action);
        match mask.role {
            Role::LocationSelect => next.location_used[action] = true,
            Role::FacilitySelect => next.facility_used[action] = true,
        }
        Ok((next, cost))
    }

    /// Incremental cost of `action` by the general (asymmetry-tolerant)
    /// formula: both directed flow terms summed separately, including the
    /// structurally zero self-pair term. On symmetric instances this equals
    /// the cost reported by `step` and exists to cross-check it.
    pub fn incremental_cost_general(&self, action: usize) -> Result<f64> {
        let mask = self.legal_actions()?;
        if action >= mask.allowed.len() || !mask.allowed[action] {
            return Err(MdpError::IllegalAction { index: action });
        }
        let t = self.t();
        if t % 2 == 0 {
            return Ok(0.0);
        }
        let flows = self.instance.flows();
        let distances = self.instance.distances();
        let loc = self.sequence[t - 1];
        let mut c = 0.0;
        for p in 0..=(t - 1) / 2 {
            let (prior_loc, prior_fac) = if p == (t - 1) / 2 {
                (loc, action) // self pair: zero-diagonal flow and distance
            } else {
                (self.sequence[2 * p], self.sequence[2 * p + 1])
            };
            c += flows[(prior_fac, action)] * distances[(prior_loc, loc)]
                + flows[(action, prior_fac)] * distances[(loc, prior_loc)];
        }
        Ok(c)
    }

    /// Read off the assignment from a terminal state.
    pub fn assignment(&self) -> Result<Assignment> {
        let n = self.instance.n();
        if !self.is_terminal() {
            return Err(MdpError::NonTerminal {
                t: self.t(),
                expected: 2 * n,
            });
        }
        let mut perm = vec![0usize; n];
        for p in 0..n {
            perm[self.sequence[2 * p]] = self.sequence[2 * p + 1];
        }
        Ok(Assignment::new(perm).expect("masks guarantee a permutation"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qapforge_core::{generate_instance, Mat};
    use qapforge_rng::SplitMix64;

    fn two_facility_instance() -> QapInstance {
        let flows = Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        QapInstance::new(vec![[0.0, 0.0], [1.0, 0.0]], flows).unwrap()
    }

    #[test]
    fn initial_state_allows_all_locations() {
        let mut rng = SplitMix64::new(1);
        let inst = generate_instance(&mut rng, 10).unwrap();
        let s = MdpState::initial(&inst);
        assert!(!s.is_terminal());
        let mask = s.legal_actions().unwrap();
        assert_eq!(mask.role, Role::LocationSelect);
        assert_eq!(mask.count_allowed(), 10);
    }

    #[test]
    fn roles_alternate_and_masks_shrink() {
        let mut rng = SplitMix64::new(2);
        let inst = generate_instance(&mut rng, 4).unwrap();
        let s0 = MdpState::initial(&inst);
        let (s1, _) = s0.step(3).unwrap();
        let m1 = s1.legal_actions().unwrap();
        assert_eq!(m1.role, Role::FacilitySelect);
        assert_eq!(m1.count_allowed(), 4);
        let (s2, _) = s1.step(1).unwrap();
        let m2 = s2.legal_actions().unwrap();
        assert_eq!(m2.role, Role::LocationSelect);
        assert!(!m2.allowed[3]);
        assert_eq!(m2.count_allowed(), 3);
    }

    #[test]
    fn one_facility_remains_at_last_step() {
        let mut rng = SplitMix64::new(3);
        let inst = generate_instance(&mut rng, 3).unwrap();
        let mut s = MdpState::initial(&inst);
        while s.t() < 2 * inst.n() - 1 {
            let a = s.legal_actions().unwrap().allowed_indices().next().unwrap();
            s = s.step(a).unwrap().0;
        }
        assert_eq!(s.legal_actions().unwrap().count_allowed(), 1);
    }

    #[test]
    fn first_placement_is_free_then_pair_cost() {
        let inst = two_facility_instance();
        let s0 = MdpState::initial(&inst);
        let (s1, c0) = s0.step(0).unwrap();
        let (s2, c1) = s1.step(0).unwrap();
        let (s3, c2) = s2.step(1).unwrap();
        let (s4, c3) = s3.step(1).unwrap();
        assert_eq!([c0, c1, c2], [0.0, 0.0, 0.0]);
        assert!((c3 - 2.0).abs() < 1e-15, "pair cost {c3}");
        assert!(s4.is_terminal());
    }

    #[test]
    fn illegal_and_terminal_actions_rejected() {
        let inst = two_facility_instance();
        let s0 = MdpState::initial(&inst);
        let (s1, _) = s0.step(0).unwrap(); // location 0
        let (s2, _) = s1.step(1).unwrap(); // facility 1 -> location 0
        let (s3, _) = s2.step(1).unwrap(); // location 1
        // facility 1 is already placed
        assert!(matches!(s3.step(1), Err(MdpError::IllegalAction { index: 1 })));
        assert!(matches!(s0.step(7), Err(MdpError::IllegalAction { index: 7 })));
        let (s4, _) = s3.step(0).unwrap();
        assert!(matches!(s4.step(0), Err(MdpError::TerminalState)));
        assert!(matches!(s4.legal_actions(), Err(MdpError::TerminalState)));
    }

    #[test]
    fn assignment_read_off() {
        let inst = two_facility_instance();
        let s = MdpState::initial(&inst);
        let (s, _) = s.step(1).unwrap(); // location 1
        let (s, _) = s.step(0).unwrap(); // facility 0 -> location 1
        let (s, _) = s.step(0).unwrap(); // location 0
        assert!(matches!(
            s.assignment(),
            Err(MdpError::NonTerminal { t: 3, expected: 4 })
        ));
        let (s, _) = s.step(1).unwrap(); // facility 1 -> location 0
        assert_eq!(s.assignment().unwrap().as_slice(), &[1, 0]);
    }

    #[test]
    fn identity_order_episode_gives_identity_permutation() {
        let mut rng = SplitMix64::new(8);
        let inst = generate_instance(&mut rng, 5).unwrap();
        let mut s = MdpState::initial(&inst);
        for k in 0..5 {
            s = s.step(k).unwrap().0;
            s = s.step(k).unwrap().0;
        }
        assert_eq!(s.assignment().unwrap().as_slice(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn general_form_matches_symmetric_simplification() {
        let mut rng = SplitMix64::new(21);
        for _ in 0..20 {
            let n = 2 + rng.next_index(6);
            let inst = generate_instance(&mut rng, n).unwrap();
            let mut s = MdpState::initial(&inst);
            while !s.is_terminal() {
                let options: Vec<usize> =
                    s.legal_actions().unwrap().allowed_indices().collect();
                let a = options[rng.next_index(options.len())];
                let general = s.incremental_cost_general(a).unwrap();
                let (next, fast) = s.step(a).unwrap();
                assert!(
                    (general - fast).abs() <= 1e-12 * general.abs().max(1.0),
                    "general {general} vs symmetric {fast}"
                );
                s = next;
            }
        }
    }
}

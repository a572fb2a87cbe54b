//! Counter-based random streams.
//!
//! Every draw in a simulation is addressed by `(master seed, domain,
//! replicate, arm, subject, purpose)`. The first three select a ChaCha8 key,
//! the last three select one of its 2^64 independent streams. Adding
//! subjects, replicates or draw purposes therefore never shifts any other
//! draw, and replicates can run in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Arm;

/// Separates otherwise identical keys used for different jobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Replicate = 1,
    Truth = 2,
    Bootstrap = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Frailty = 1,
    Covariate = 2,
    Death = 3,
    Censoring = 4,
    Events = 5,
    Resample = 6,
}

const MAX_SUBJECT: u64 = 1 << 48;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 256-bit ChaCha key for one `(seed, domain, replicate)` triple.
fn derive_key(seed: u64, domain: Domain, replicate: u64) -> [u8; 32] {
    let mut state = splitmix64(seed ^ splitmix64(domain as u64));
    state = splitmix64(state ^ splitmix64(replicate.wrapping_add(0x5851_f42d_4c95_7f2d)));
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    key
}

/// Random streams for one subject (or one resampling unit).
#[derive(Debug, Clone, Copy)]
pub struct SubjectStreams {
    key: [u8; 32],
    arm: Arm,
    subject: u64,
}

impl SubjectStreams {
    pub fn new(seed: u64, domain: Domain, replicate: u64, arm: Arm, subject: u64) -> Self {
        assert!(subject < MAX_SUBJECT, "subject index out of range");
        SubjectStreams {
            key: derive_key(seed, domain, replicate),
            arm,
            subject,
        }
    }

    /// Same key, different subject; avoids re-deriving the key per subject.
    pub fn with_subject(&self, subject: u64) -> Self {
        assert!(subject < MAX_SUBJECT, "subject index out of range");
        SubjectStreams { subject, ..*self }
    }

    pub fn rng(&self, purpose: Purpose) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        let stream = ((self.arm.label() as u64) << 56) | ((purpose as u64) << 48) | self.subject;
        rng.set_stream(stream);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn first(s: &SubjectStreams, p: Purpose) -> u64 {
        s.rng(p).random()
    }

    #[test]
    fn deterministic_and_separated() {
        let a = SubjectStreams::new(7, Domain::Replicate, 3, Arm::One, 10);
        let b = SubjectStreams::new(7, Domain::Replicate, 3, Arm::One, 10);
        assert_eq!(first(&a, Purpose::Death), first(&b, Purpose::Death));
        let draws = [
            first(&a, Purpose::Death),
            first(&a, Purpose::Events),
            first(&a.with_subject(11), Purpose::Death),
            first(&SubjectStreams::new(7, Domain::Replicate, 4, Arm::One, 10), Purpose::Death),
            first(&SubjectStreams::new(7, Domain::Replicate, 3, Arm::Two, 10), Purpose::Death),
            first(&SubjectStreams::new(8, Domain::Replicate, 3, Arm::One, 10), Purpose::Death),
            first(&SubjectStreams::new(7, Domain::Truth, 3, Arm::One, 10), Purpose::Death),
        ];
        for i in 0..draws.len() {
            for j in i + 1..draws.len() {
                assert_ne!(draws[i], draws[j], "streams {i} and {j} collide");
            }
        }
    }

    #[test]
    fn with_subject_matches_fresh_key() {
        let base = SubjectStreams::new(1, Domain::Bootstrap, 0, Arm::Two, 0);
        let fresh = SubjectStreams::new(1, Domain::Bootstrap, 0, Arm::Two, 99);
        assert_eq!(
            first(&base.with_subject(99), Purpose::Resample),
            first(&fresh, Purpose::Resample)
        );
    }
}

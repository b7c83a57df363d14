//! Resource limits shared by one decision: enumerated sequences, S-pairs,
//! and wall-clock time. Exceeding any of them yields `Error::Budget`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Budget {
    pub max_seqs: usize,
    pub max_pairs: usize,
    pub deadline: Option<Instant>,
    seqs: AtomicUsize,
    pairs: AtomicUsize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(10_000, 2_000_000, None)
    }
}

impl Budget {
    pub fn new(max_seqs: usize, max_pairs: usize, timeout: Option<Duration>) -> Self {
        Budget {
            max_seqs,
            max_pairs,
            deadline: timeout.map(|t| Instant::now() + t),
            seqs: AtomicUsize::new(0),
            pairs: AtomicUsize::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(usize::MAX, usize::MAX, None)
    }

    pub fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Budget("time limit reached".into())),
            _ => Ok(()),
        }
    }

    pub fn charge_pair(&self) -> Result<()> {
        let used = self.pairs.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.max_pairs {
            return Err(Error::Budget(format!("S-pair limit {} reached", self.max_pairs)));
        }
        if used % 64 == 0 {
            self.check_time()?;
        }
        Ok(())
    }

    pub fn charge_seq(&self) -> Result<()> {
        let used = self.seqs.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.max_seqs {
            return Err(Error::Budget(format!("sequence limit {} reached", self.max_seqs)));
        }
        self.check_time()
    }

    pub fn pairs_used(&self) -> usize {
        self.pairs.load(Ordering::Relaxed)
    }

    pub fn seqs_used(&self) -> usize {
        self.seqs.load(Ordering::Relaxed)
    }
}

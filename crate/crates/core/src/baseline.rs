//! Baseline players: lowest-id and uniformly random.

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use crate::board::{Element, GameState, Player};
use crate::engine::{StageView, Strategy};
use crate::error::{Error, Result};
use crate::sweep::rng_from_seed;

fn quota(role: Player, state: &GameState) -> usize {
    match role {
        Player::Maker => 1,
        Player::Breaker => state.bias().min(state.free_count()),
    }
}

/// Claims the lowest free ids.
#[derive(Clone, Debug)]
pub struct FirstFree {
    role: Player,
}

impl FirstFree {
    pub fn new(role: Player) -> Self {
        FirstFree { role }
    }
}

impl Strategy for FirstFree {
    fn name(&self) -> String {
        "first-free".into()
    }

    fn role(&self) -> Player {
        self.role
    }

    fn start_stage(&mut self, _view: &StageView<'_>) -> Result<()> {
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        let q = quota(self.role, state);
        if q == 0 {
            return Err(Error::InvalidState("no free element".into()));
        }
        Ok(state.free_elements().take(q).collect())
    }
}

/// Claims a uniformly random subset of the free elements of the allowed size.
#[derive(Clone, Debug)]
pub struct RandomPlayer {
    role: Player,
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomPlayer {
    pub fn new(role: Player, seed: u64) -> Self {
        RandomPlayer {
            role,
            seed,
            rng: rng_from_seed(seed),
        }
    }

    pub fn maker(seed: u64) -> Self {
        RandomPlayer::new(Player::Maker, seed)
    }

    pub fn breaker(seed: u64) -> Self {
        RandomPlayer::new(Player::Breaker, seed)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `k` distinct elements of `pool`, uniformly at random, in ascending order.
pub fn sample_elements(rng: &mut ChaCha8Rng, pool: &[Element], k: usize) -> Vec<Element> {
    let mut out: Vec<Element> = sample(rng, pool.len(), k.min(pool.len()))
        .into_iter()
        .map(|i| pool[i])
        .collect();
    out.sort_unstable();
    out
}

impl Strategy for RandomPlayer {
    fn name(&self) -> String {
        "random".into()
    }

    fn role(&self) -> Player {
        self.role
    }

    fn start_stage(&mut self, _view: &StageView<'_>) -> Result<()> {
        Ok(())
    }

    fn choose(&mut self, state: &GameState) -> Result<Vec<Element>> {
        let q = quota(self.role, state);
        if q == 0 {
            return Err(Error::InvalidState("no free element".into()));
        }
        let pool: Vec<Element> = state.free_elements().collect();
        Ok(sample_elements(&mut self.rng, &pool, q))
    }
}

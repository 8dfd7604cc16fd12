//! Timed replays for the throughput experiment.
//!
//! The harness generates an instance once, in memory, and replays it from
//! the empty market while timing only the replay itself. Script generation
//! and report printing never land inside a timed section, so the numbers
//! track the state machine and not the harness.

use std::time::Instant;

use market_core::instance::{generate, GenParams};
use market_core::market::{run_script, Market, Replay, ReplayMode};
use market_core::script::Operation;

pub struct TimedReplay {
    pub market: Market,
    pub replay: Replay,
    pub exec_time_s: f64,
}

/// Replay `ops` from the empty market, lenient mode, and time it.
pub fn timed_replay(ops: &[Operation]) -> TimedReplay {
    let start = Instant::now();
    let (market, replay) = run_script(&Market::empty(), ops, ReplayMode::Lenient);
    let exec_time_s = start.elapsed().as_secs_f64();
    TimedReplay { market, replay, exec_time_s }
}

/// Generate the instance for `params` and replay it `repeat` times.
///
/// Generated instances are feasible by construction, so any recorded
/// failure is reported as a panic rather than silently folded into the
/// timing numbers.
pub fn run_bench(params: &GenParams, repeat: u64) -> Vec<TimedReplay> {
    assert!(repeat >= 1, "bench needs at least one repetition");
    let script = generate(params);
    (0..repeat)
        .map(|_| {
            let timed = timed_replay(&script.operations);
            assert!(
                timed.replay.failures.is_empty(),
                "generated instance {params:?} replayed with failures: {:?}",
                timed.replay.failures
            );
            timed
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_produces_one_timed_replay_per_repetition() {
        let params = GenParams { users: 2, items: 4, transactions: 32, seed: 11 };
        let reps = run_bench(&params, 3);
        assert_eq!(reps.len(), 3);
        for rep in &reps {
            assert_eq!(rep.replay.sell_count, 32);
            assert!(rep.exec_time_s >= 0.0);
            assert_eq!(rep.market.accounts.length_tr(), 2);
        }
    }
}

//! The replay report and its YAML rendering.

use market_core::market::{total_money, Market, Replay};

/// Everything a replay run reports: what the script declared, what
/// happened, and how long each stage took. `transactions_per_s` is the
/// headline throughput figure and divides the successful sales by the
/// replay time alone; the parse and total times are reported alongside so
/// other bases can be derived.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub users_declared: u64,
    pub items_declared: u64,
    pub operations_total: u64,
    pub sell_count: u64,
    /// Script index and error tag of every rejected operation.
    pub failures: Vec<(u64, &'static str)>,
    pub parse_time_s: f64,
    pub exec_time_s: f64,
    pub total_time_s: f64,
    pub transactions_per_s: f64,
    pub final_total_money: u64,
}

impl RunReport {
    pub fn new(
        market: &Market,
        replay: &Replay,
        parse_time_s: f64,
        exec_time_s: f64,
        total_time_s: f64,
    ) -> Self {
        let sell_count = replay.sell_count as u64;
        RunReport {
            users_declared: market.accounts.length_tr(),
            items_declared: market.items.length_tr(),
            operations_total: replay.operations_total as u64,
            sell_count,
            failures: replay
                .failures
                .iter()
                .map(|failure| (failure.index as u64, failure.error.kind()))
                .collect(),
            parse_time_s,
            exec_time_s,
            total_time_s,
            transactions_per_s: throughput(sell_count, exec_time_s),
            final_total_money: total_money(market),
        }
    }

    /// One YAML mapping, two-space indentation, field order fixed.
    pub fn render(&self) -> String {
        use std::fmt::Write;

        let mut out = String::new();
        writeln!(out, "users_declared: {}", self.users_declared).unwrap();
        writeln!(out, "items_declared: {}", self.items_declared).unwrap();
        writeln!(out, "operations_total: {}", self.operations_total).unwrap();
        writeln!(out, "sell_count: {}", self.sell_count).unwrap();
        if self.failures.is_empty() {
            writeln!(out, "failures: []").unwrap();
        } else {
            writeln!(out, "failures:").unwrap();
            for (index, error) in &self.failures {
                writeln!(out, "  - index: {index}").unwrap();
                writeln!(out, "    error: {error}").unwrap();
            }
        }
        writeln!(out, "parse_time_s: {:.6}", self.parse_time_s).unwrap();
        writeln!(out, "exec_time_s: {:.6}", self.exec_time_s).unwrap();
        writeln!(out, "total_time_s: {:.6}", self.total_time_s).unwrap();
        writeln!(out, "transactions_per_s: {:.1}", self.transactions_per_s).unwrap();
        writeln!(out, "final_total_money: {}", self.final_total_money).unwrap();
        out
    }
}

/// Sales per second; 0 when nothing was measured, so an instant empty
/// replay cannot print a division by zero.
pub fn throughput(sell_count: u64, exec_time_s: f64) -> f64 {
    if exec_time_s > 0.0 {
        sell_count as f64 / exec_time_s
    } else {
        0.0
    }
}

pub fn minimum(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use market_core::market::{run_script, Market, ReplayMode};
    use market_core::script::Operation;

    #[test]
    fn renders_the_fixed_field_order() {
        let ops = [
            Operation::Deposit { user: 0, amount: 100 },
            Operation::Assign { item: 0, user: 0 },
            Operation::Price { item: 0, amount: 30 },
            Operation::Deposit { user: 1, amount: 100 },
            Operation::Sell { item: 0, buyer: 1 },
        ];
        let (market, replay) = run_script(&Market::empty(), &ops, ReplayMode::Strict);
        let report = RunReport::new(&market, &replay, 0.001, 0.002, 0.004);
        assert_eq!(
            report.render(),
            "users_declared: 2\n\
             items_declared: 1\n\
             operations_total: 5\n\
             sell_count: 1\n\
             failures: []\n\
             parse_time_s: 0.001000\n\
             exec_time_s: 0.002000\n\
             total_time_s: 0.004000\n\
             transactions_per_s: 500.0\n\
             final_total_money: 200\n"
        );
    }

    #[test]
    fn renders_failures_as_a_nested_list() {
        let ops = [Operation::Sell { item: 0, buyer: 1 }];
        let (market, replay) = run_script(&Market::empty(), &ops, ReplayMode::Lenient);
        let report = RunReport::new(&market, &replay, 0.0, 0.0, 0.0);
        let rendered = report.render();
        assert!(rendered.contains("failures:\n  - index: 0\n    error: UnknownItem\n"));
        assert!(rendered.contains("transactions_per_s: 0.0\n"));
    }

    #[test]
    fn throughput_guards_against_zero_time() {
        assert_eq!(throughput(100, 0.0), 0.0);
        assert_eq!(throughput(100, 2.0), 50.0);
    }

    #[test]
    fn median_and_minimum_of_samples() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(median(&[7.0]), 7.0);
        assert_eq!(minimum(&[3.0, 1.0, 2.0]), 1.0);
    }
}

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// One executed control step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    /// State the action was applied in.
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub cumulative: f64,
    /// Wall time spent choosing the action.
    pub decision_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnvTrace {
    pub steps: Vec<TraceStep>,
    pub terminal: bool,
    pub final_state: Vec<f64>,
}

impl EnvTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }

    pub fn actions(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.action).collect()
    }

    /// One JSON object per step.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for s in &self.steps {
            serde_json::to_writer(&mut w, s)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_lines() {
        let t = EnvTrace {
            steps: (0..3)
                .map(|i| TraceStep { step: i, state: vec![i as f64], action: 1, reward: -1.0, cumulative: -(i as f64 + 1.0), decision_ms: 0.0 })
                .collect(),
            terminal: false,
            final_state: vec![3.0],
        };
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        let back: TraceStep = serde_json::from_str(text.lines().nth(2).unwrap()).unwrap();
        assert_eq!(back, t.steps[2]);
        assert_eq!(t.total_reward(), -3.0);
    }
}

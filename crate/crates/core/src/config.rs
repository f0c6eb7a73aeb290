use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PriorityScheme {
    /// Shorter start-goal distance plans first; ties keep input order.
    #[default]
    DistanceAscending,
    AsGiven,
}

/// Knobs shared by the single-robot search and the prioritized driver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    /// Wait increment used when a departure collides.
    pub delta: f64,
    /// How long the starts of not-yet-planned robots stay blocked.
    pub ssi_duration: f64,
    /// Wall-clock budget per multi-robot planning call, in seconds.
    pub timeout_s: f64,
    /// Neighborhood order: 1 = 4 neighbors, 2 = 8, 3 = 16, ...
    pub neighborhood: u32,
    /// Shortcut through the grandparent when it has line of sight.
    pub any_angle: bool,
    /// Reschedule budget; `None` means one per robot.
    pub max_reschedules: Option<usize>,
    pub priority_scheme: PriorityScheme,
    /// Minimum wait inserted before every translation.
    pub wait_floor: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            delta: 0.1,
            ssi_duration: 3.0,
            timeout_s: 60.0,
            neighborhood: 2,
            any_angle: true,
            max_reschedules: None,
            priority_scheme: PriorityScheme::DistanceAscending,
            wait_floor: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("delta must be positive, got {0}")]
    Delta(f64),
    #[error("ssi_duration must be non-negative, got {0}")]
    Ssi(f64),
    #[error("timeout must be positive, got {0}")]
    Timeout(f64),
    #[error("neighborhood order must be in 1..=5, got {0}")]
    Neighborhood(u32),
    #[error("wait_floor must be non-negative, got {0}")]
    WaitFloor(f64),
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.delta > 0.0) {
            return Err(ConfigError::Delta(self.delta));
        }
        if !(self.ssi_duration >= 0.0) {
            return Err(ConfigError::Ssi(self.ssi_duration));
        }
        if !(self.timeout_s > 0.0) {
            return Err(ConfigError::Timeout(self.timeout_s));
        }
        if !(1..=5).contains(&self.neighborhood) {
            return Err(ConfigError::Neighborhood(self.neighborhood));
        }
        if !(self.wait_floor >= 0.0) {
            return Err(ConfigError::WaitFloor(self.wait_floor));
        }
        Ok(())
    }
}

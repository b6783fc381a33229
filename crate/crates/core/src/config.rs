use crate::exec::Exec;

/// Desk-scale resource limits shared by every builder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest bar-complex degree that may be built.
    pub degree_cap: usize,
    /// Largest allowed chain group dimension `|G|^n * dim V`.
    pub size_cap: usize,
    /// Largest module dimension accepted by the dual-norm LP.
    pub dual_norm_dim_cap: usize,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            degree_cap: 3,
            size_cap: 5000,
            dual_norm_dim_cap: 24,
            exec: Exec::default(),
        }
    }
}

impl Config {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

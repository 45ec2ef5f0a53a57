/// Environment variable overriding [`Caps::order`].
pub const ORDER_CAP_ENV: &str = "IWASAWA_ORDER_CAP";

/// Size limits guarding table construction and subgroup enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order any constructor will build.
    pub order: usize,
    /// Largest number of subgroups enumeration will collect.
    pub lattice: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { order: 20_000, lattice: 100_000 }
    }
}

impl Caps {
    /// Defaults, with the order cap taken from `IWASAWA_ORDER_CAP` when set
    /// to a positive integer.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(v) = std::env::var(ORDER_CAP_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            if v > 0 {
                caps.order = v;
            }
        }
        caps
    }
}

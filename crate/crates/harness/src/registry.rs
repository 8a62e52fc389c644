use ocba_core::instance::{decreasing_variances, increasing_variances};
use ocba_core::ProblemInstance;

use crate::{HarnessError, HarnessResult};

/// Names accepted by [`builtin_instance`].
pub const BUILTIN_NAMES: [&str; 2] = ["instance1", "instance2"];

/// Looks up a built-in instance.
///
/// * `instance1`: `mu_i = i`, `sigma_i = i` for `i = 1..=10`
/// * `instance2`: `mu_i = i`, `sigma_i = 11 - i`
pub fn builtin_instance(name: &str) -> HarnessResult<ProblemInstance> {
    match name {
        "instance1" => Ok(increasing_variances()),
        "instance2" => Ok(decreasing_variances()),
        other => Err(HarnessError::Config(format!(
            "unknown instance `{other}` (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let one = builtin_instance("instance1").unwrap();
        assert_eq!(one.mu(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
        assert_eq!(one.sigma(), one.mu());
        assert_eq!(one.best(), 9);
        let two = builtin_instance("instance2").unwrap();
        assert_eq!(two.sigma(), &[10.0, 9.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
        assert_eq!(two.best(), 9);
        let err = builtin_instance("instance3").unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}

use crate::error::{Error, Result};
use std::sync::OnceLock;

fn overridden() -> bool {
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| {
        std::env::var("UCF_GUARD_OVERRIDE").map(|v| !v.is_empty() && v != "0").unwrap_or(false)
    })
}

/// Desk-scale size guard. Lifted by UCF_GUARD_OVERRIDE=1.
pub fn guard(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok || overridden() {
        Ok(())
    } else {
        Err(Error::Guard(what()))
    }
}

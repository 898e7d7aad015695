//! Plaintext attacks driven through an [`Oracle`] that enforces the attack model.

mod norouzi;
mod oracle;
mod parvin;
mod recovered;
mod reduce;
mod yang;

pub use norouzi::{cp_attack_norouzi, kp_attack_norouzi, kp_attack_norouzi_oracle, NOROUZI_MAX_ATTEMPTS};
pub use oracle::{challenge, AttackModel, LocalOracle, Oracle, Unpermuted};
pub use parvin::{cp_attack_parvin_full, cp_attack_parvin_permutation, kp_attack_parvin_diffusion, PARVIN_PROBE};
pub use recovered::{recovery_rate, RecoveredKey};
pub use reduce::{reduce_norouzi_pair, reduce_parvin_pairs};
pub use yang::{cp_attack_yang_detailed, cp_attack_yang_full, cp_attack_yang_permutation, YangPermutation, YANG_PROBE};

use crate::image::Image;
use crate::keysched::ByteStream;
use crate::{Error, Result};

fn require_model<O: Oracle + ?Sized>(oracle: &O, model: AttackModel) -> Result<()> {
    if oracle.model() != model {
        return Err(Error::OracleRefused(format!("attack needs a {model} oracle, got {}", oracle.model())));
    }
    Ok(())
}

fn random_image(rng: &mut ByteStream, height: usize, width: usize) -> Image {
    Image::new(height, width, rng.bytes(height * width)).expect("dims come from a live oracle")
}

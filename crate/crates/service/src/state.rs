use std::path::PathBuf;
use std::sync::Arc;

use signbridge_core::lexicon::LexiconStore;
use signbridge_core::nlp::EnglishFrontEnd;
use signbridge_core::recognizer::{load_model, MlpModel};

use crate::accounts::AccountStore;
use crate::config::ServiceConfig;
use crate::StartupError;

/// Shared, cheaply clonable handle to everything the handlers need.
#[derive(Clone)]
pub struct AppState(Arc<Shared>);

struct Shared {
    front_end: &'static EnglishFrontEnd,
    lexicon: LexiconStore,
    accounts: AccountStore,
    model: Option<MlpModel>,
    assets_dir: PathBuf,
}

impl AppState {
    pub fn new(lexicon: LexiconStore, accounts: AccountStore, model: Option<MlpModel>, assets_dir: PathBuf) -> Self {
        AppState(Arc::new(Shared {
            front_end: EnglishFrontEnd::bundled(),
            lexicon,
            accounts,
            model,
            assets_dir,
        }))
    }

    pub fn from_config(config: &ServiceConfig) -> Result<Self, StartupError> {
        let lexicon = LexiconStore::open(config.manifest_path())?;
        let accounts = AccountStore::open(config.accounts_path(), config.pbkdf2_iterations, config.session_ttl())?;
        let model = config.model_path.as_deref().map(load_model).transpose()?;
        let assets_dir = config.assets_dir();
        std::fs::create_dir_all(&assets_dir).map_err(|source| StartupError::Io {
            path: assets_dir.clone(),
            source,
        })?;
        Ok(Self::new(lexicon, accounts, model, assets_dir))
    }

    pub fn front_end(&self) -> &'static EnglishFrontEnd {
        self.0.front_end
    }

    pub fn lexicon(&self) -> &LexiconStore {
        &self.0.lexicon
    }

    pub fn accounts(&self) -> &AccountStore {
        &self.0.accounts
    }

    pub fn model(&self) -> Option<&MlpModel> {
        self.0.model.as_ref()
    }

    pub fn assets_dir(&self) -> &PathBuf {
        &self.0.assets_dir
    }
}

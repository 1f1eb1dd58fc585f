use clap::Parser;
use signbridge_service::{init_logging, serve, ServiceConfig};

/// Sign-language translation and recognition service.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(flatten)]
    config: ServiceConfig,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    init_logging();
    serve(cli.config).await?;
    Ok(())
}

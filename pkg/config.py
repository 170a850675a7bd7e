from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    codebook_path: str = str(Path(__file__).parent / "app" / "codebook" / "crm.json")
    templates_dir: str = str(Path(__file__).parent / "app" / "templates")
    consensus_threshold: float = 0.75
    seed: int = 0
    classification_mode: str = "grid"
    json_indent: int = 2

    model_config = SettingsConfigDict(frozen=True)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        # Flags only: the environment and .env files never change a run.
        return (init_settings,)


settings = Settings()

from pydantic_settings import BaseSettings, PydanticBaseSettingsSource

APP_VERSION = "v0.3.0"


class Settings(BaseSettings):
    # Server
    HOST: str = "0.0.0.0"
    PORT: int = 8585
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Exact oracle
    ORACLE_MAX_VERTICES: int = 24
    GADGET_MAX_VERTICES: int = 96
    SAT_MAX_VARIABLES: int = 24
    # Graphs at least this large are decided by z3 instead of backtracking
    SMT_MIN_VERTICES: int = 40

    # Gadget search
    SEARCH_MAX_VERTICES: int = 8
    SEARCH_SAMPLES: int = 400
    DEFAULT_SEED: int = 0

    # Batch round trips
    BATCH_WORKERS: int = 4

    model_config = {"env_prefix": "HCOLOR_"}


class CliSettings(Settings):
    """Settings built from command-line flags only; the environment is ignored."""

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)


settings = Settings()

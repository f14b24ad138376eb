from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "kat-mixed"
    VERSION: str = "1.0.0"

    # Bounds
    DEFAULT_MAX_LEN: int = 5
    DEFAULT_STATE_CAP: int = 10000
    NORMAL_FORM_CACHE_SIZE: int = 65536

    # Output
    DEFAULT_FORMAT: str = "text"

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()

from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    derham_threads: int = 0  # 0 = run suite cases serially
    default_weight_cutoff: int = 4
    default_degree_cutoff: int = 10
    default_poly_weight_cutoff: int = 4
    log_level: str = "INFO"
    log_to_files: bool = True
    suite_artifacts_enabled: bool = True
    suite_golden_path: str = ""  # empty = packaged golden file
    random_seed: int = 20240601

    @property
    def suite_parallelism(self) -> int:
        return max(0, int(self.derham_threads))

    class Config:
        env_file = ".env"
        case_sensitive = False

settings = Settings()

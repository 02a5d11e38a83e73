from dsubh_bounds.config.paths import app_base_dir, default_corpus_path, env_file_path


def test_env_file_path_is_reasonable():
    p = env_file_path()
    # Just a sanity check: ends with .env next to the repo root
    assert p.name == ".env"
    assert p.parent == app_base_dir()


def test_default_corpus_ships_with_the_package():
    p = default_corpus_path()
    assert p.name == "default_corpus.json"
    assert p.is_file()

from flask import Flask, jsonify
from flask_cors import CORS

from config import VERSION, configure_logging, get_config, load_evaluation_config


def create_app(config_name=None, evaluation_config=None):
    env_config = get_config(config_name)

    app = Flask(__name__)
    app.config.from_object(env_config)
    CORS(app, origins=env_config.CORS_ORIGINS)

    configure_logging(env_config.LOG_LEVEL)
    app.config["EVALUATION"] = evaluation_config or load_evaluation_config(env_config=env_config)

    from routes.Evaluation import evaluation
    app.register_blueprint(evaluation)

    @app.route("/")
    def home():
        return jsonify(service="slidebench", version=VERSION)

    from cli import init_cli
    init_cli(app)

    app.logger.info("slidebench %s ready (profile %s)", VERSION,
                    app.config["EVALUATION"].profile.name)
    return app

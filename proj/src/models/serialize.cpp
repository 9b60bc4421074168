#include <json.hpp>

#include "decompleak/error.hpp"
#include "decompleak/models.hpp"

namespace decompleak {

namespace {

constexpr int kFormatVersion = 1;
using nlohmann::json;

json history_json(const TrainingHistory& h) {
    return json{{"train_loss", h.train_loss},
                {"val_loss", h.val_loss},
                {"test_loss", h.test_loss},
                {"best_epoch", h.best_epoch}};
}

} // namespace

std::string to_json(const ModelParams& params, const TrainingHistory& history) {
    json doc;
    doc["format"] = "decompleak.model";
    doc["version"] = kFormatVersion;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PersistenceParams>) {
                doc["kind"] = "persistence";
                doc["window"] = p.window;
                doc["channels"] = p.channels;
            } else if constexpr (std::is_same_v<T, RidgeParams>) {
                doc["kind"] = "ridge";
                doc["coef"] = p.coef;
                doc["intercept"] = p.intercept;
            } else {
                doc["kind"] = "mlp";
                doc["input_dim"] = p.input_dim();
                json layers = json::array();
                for (std::size_t l = 0; l < p.layer_count(); ++l) {
                    const auto w = p.weight(l);
                    const auto b = p.bias(l);
                    layers.push_back(json{
                        {"rows", w.rows()},
                        {"cols", w.cols()},
                        {"weights", std::vector<double>(w.data(), w.data() + w.size())},
                        {"bias", std::vector<double>(b.data(), b.data() + b.size())},
                    });
                }
                doc["layers"] = std::move(layers);
            }
        },
        params);
    doc["history"] = history_json(history);
    return doc.dump(2);
}

TrainResult from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("malformed model document: ") + e.what());
    }
    try {
        if (doc.at("format") != "decompleak.model") throw InvalidInputError("not a model document");
        if (doc.at("version").get<int>() != kFormatVersion)
            throw InvalidInputError("unsupported model document version");

        TrainResult r;
        const auto& h = doc.at("history");
        r.history.train_loss = h.at("train_loss").get<std::vector<double>>();
        r.history.val_loss = h.at("val_loss").get<std::vector<double>>();
        r.history.test_loss = h.at("test_loss").get<std::vector<double>>();
        r.history.best_epoch = h.at("best_epoch").get<std::size_t>();

        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "persistence") {
            r.params = PersistenceParams{doc.at("window").get<std::size_t>(), doc.at("channels").get<std::size_t>()};
        } else if (kind == "ridge") {
            r.params = RidgeParams{doc.at("coef").get<std::vector<double>>(), doc.at("intercept").get<double>()};
        } else if (kind == "mlp") {
            const auto& layers = doc.at("layers");
            if (layers.empty()) throw InvalidInputError("MLP document has no layers");
            std::vector<std::size_t> hidden;
            for (std::size_t l = 0; l + 1 < layers.size(); ++l) hidden.push_back(layers[l].at("rows").get<std::size_t>());
            MlpParams p(doc.at("input_dim").get<std::size_t>(), hidden);
            for (std::size_t l = 0; l < layers.size(); ++l) {
                const auto w = layers[l].at("weights").get<std::vector<double>>();
                const auto b = layers[l].at("bias").get<std::vector<double>>();
                auto wm = p.weight(l);
                auto bm = p.bias(l);
                if (layers[l].at("cols").get<std::size_t>() != p.fan_in(l) ||
                    w.size() != static_cast<std::size_t>(wm.size()) || b.size() != static_cast<std::size_t>(bm.size()))
                    throw InvalidInputError("MLP layer shapes do not chain");
                std::copy(w.begin(), w.end(), wm.data());
                std::copy(b.begin(), b.end(), bm.data());
            }
            r.params = std::move(p);
        } else {
            throw InvalidInputError("unknown model kind '" + kind + "'");
        }
        return r;
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("malformed model document: ") + e.what());
    }
}

} // namespace decompleak

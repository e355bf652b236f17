#include "liftdp/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "liftdp/errors.hpp"

namespace liftdp {

using nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw IoError("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw IoError("short write to '" + path + "'");
}

namespace {

ordered_json vecs_to_json(const std::vector<Vec>& vectors) {
    ordered_json j = ordered_json::array();
    for (const auto& v : vectors) j.push_back(v);
    return j;
}

std::vector<Vec> vecs_from_json(const ordered_json& j) {
    std::vector<Vec> out;
    for (const auto& v : j) out.push_back(v.get<Vec>());
    return out;
}

ordered_json samples_to_json(const std::vector<SequenceSample>& samples) {
    ordered_json j = ordered_json::array();
    for (const auto& s : samples) {
        j.push_back({{"inputs", vecs_to_json(s.inputs)}, {"labels", vecs_to_json(s.labels)}});
    }
    return j;
}

std::vector<SequenceSample> samples_from_json(const ordered_json& j) {
    std::vector<SequenceSample> out;
    for (const auto& s : j) {
        SequenceSample sample;
        sample.inputs = vecs_from_json(s.at("inputs"));
        sample.labels = vecs_from_json(s.at("labels"));
        out.push_back(std::move(sample));
    }
    return out;
}

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < m.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const ordered_json& j) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    }
    return m;
}

} // namespace

std::string dataset_to_json(const Dataset& data, const RunConfig& cfg) {
    ordered_json j;
    j["version"] = 1;
    j["config"] = cfg.to_json();
    j["train"] = samples_to_json(data.train);
    j["test"] = samples_to_json(data.test);
    return j.dump(2) + "\n";
}

Dataset dataset_from_json(const std::string& bytes, const SystemConfig& cfg) {
    ordered_json j;
    try {
        j = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("dataset parse error: ") + e.what());
    }
    if (!j.contains("train") || !j.contains("test"))
        throw ValidationError("dataset file is missing train/test sections");
    Dataset data;
    data.train = samples_from_json(j.at("train"));
    data.test = samples_from_json(j.at("test"));
    for (const auto& s : data.train) s.validate(cfg);
    for (const auto& s : data.test) s.validate(cfg);
    return data;
}

void save_dataset(const std::string& path, const Dataset& data, const RunConfig& cfg) {
    write_file(path, dataset_to_json(data, cfg));
}

Dataset load_dataset(const std::string& path, const SystemConfig& cfg) {
    return dataset_from_json(read_file(path), cfg);
}

void write_dataset_manifest(const std::string& dataset_path, const RunConfig& cfg) {
    ordered_json j;
    j["file"] = dataset_path.substr(dataset_path.find_last_of('/') + 1);
    j["sha256"] = sha256_hex(read_file(dataset_path));
    j["seed"] = cfg.dataset.seed;
    j["config"] = cfg.to_json();
    write_file(dataset_path + ".manifest.json", j.dump(2) + "\n");
}

std::string policy_to_json(const PolicyDocument& doc) {
    ordered_json j;
    j["version"] = 1;
    j["config"] = doc.config.to_json();
    j["net"] = {{"mode", doc.net_mode},
                {"seed", doc.net_seed},
                {"resolution", doc.net_resolution},
                {"size", doc.net_size}};
    ordered_json initial = ordered_json::array();
    for (const auto& mu : doc.initial_counts) {
        ordered_json support = ordered_json::array();
        for (const auto& [idx, count] : mu.counts) support.push_back({idx, count});
        initial.push_back({{"ell", mu.ell}, {"support", std::move(support)}});
    }
    j["initial_counts"] = std::move(initial);
    ordered_json stages = ordered_json::array();
    for (const auto& u : doc.stages) {
        stages.push_back({{"W", matrix_to_json(u.W)},
                          {"A", matrix_to_json(u.A)},
                          {"b", u.b},
                          {"Q", matrix_to_json(u.Q)},
                          {"K", matrix_to_json(u.K)},
                          {"V", matrix_to_json(u.V)}});
    }
    j["stages"] = std::move(stages);
    j["achieved"] = {{"value", doc.value}, {"state_counts", doc.state_counts}};
    return j.dump(2) + "\n";
}

PolicyDocument policy_from_json(const std::string& bytes) {
    ordered_json j;
    try {
        j = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("policy parse error: ") + e.what());
    }
    if (j.value("version", 0) != 1) throw ValidationError("unsupported policy version");

    PolicyDocument doc;
    doc.config = RunConfig::from_json(j.at("config"));
    const auto& net = j.at("net");
    doc.net_mode = net.at("mode").get<std::string>();
    doc.net_seed = net.at("seed").get<std::uint64_t>();
    doc.net_resolution = net.at("resolution").get<int>();
    doc.net_size = net.at("size").get<std::size_t>();
    for (const auto& entry : j.at("initial_counts")) {
        QuantizedMeasure mu;
        mu.ell = entry.at("ell").get<int>();
        for (const auto& pair : entry.at("support")) {
            mu.counts.emplace_back(pair.at(0).get<std::uint32_t>(),
                                   pair.at(1).get<std::uint32_t>());
        }
        mu.validate();
        doc.initial_counts.push_back(std::move(mu));
    }
    for (const auto& stage : j.at("stages")) {
        WeightAction u;
        u.W = matrix_from_json(stage.at("W"));
        u.A = matrix_from_json(stage.at("A"));
        u.b = stage.at("b").get<Vec>();
        u.Q = matrix_from_json(stage.at("Q"));
        u.K = matrix_from_json(stage.at("K"));
        u.V = matrix_from_json(stage.at("V"));
        doc.stages.push_back(std::move(u));
    }
    doc.value = j.at("achieved").at("value").get<double>();
    doc.state_counts = j.at("achieved").at("state_counts").get<std::vector<std::size_t>>();
    if (doc.stages.size() != static_cast<std::size_t>(doc.config.system.horizon))
        throw ValidationError("policy stage count does not match the config horizon");
    return doc;
}

void save_policy(const std::string& path, const PolicyDocument& doc) {
    write_file(path, policy_to_json(doc));
}

PolicyDocument load_policy(const std::string& path) {
    return policy_from_json(read_file(path));
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    add_row(header);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ValidationError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) buffer_.push_back(',');
        buffer_ += cells[i];
    }
    buffer_.push_back('\n');
}

std::string CsvWriter::format(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string CsvWriter::format(unsigned long long value) {
    return std::to_string(value);
}

} // namespace liftdp

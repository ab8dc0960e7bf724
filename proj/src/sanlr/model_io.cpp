#include "sanlr/model_io.hpp"

#include <fstream>
#include <sstream>

#include "sanlr/error.hpp"

namespace sanlr {

namespace {

using nlohmann::json;

std::string transition_key(std::size_t nu, std::size_t from, std::size_t to) {
    return std::to_string(nu) + ":" + std::to_string(from) + "->" + std::to_string(to);
}

std::vector<std::size_t> index_list(const json& j, const char* what) {
    if (!j.is_array())
        fail(ErrorCode::Parse, std::string(what) + " must be an array");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            fail(ErrorCode::Parse, std::string(what) + " must hold nonnegative integers");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

Vector real_vector(const json& j, const char* what) {
    if (!j.is_array())
        fail(ErrorCode::Parse, std::string(what) + " must be an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            fail(ErrorCode::Parse, std::string(what) + " must be an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

SanModel mhn_from_json(const json& j) {
    if (!j.contains("theta") || !j["theta"].is_array())
        fail(ErrorCode::Parse, "mhn model needs a 'theta' matrix");
    const auto& rows = j["theta"];
    const auto d = rows.size();
    if (j.contains("d") && j["d"].get<std::size_t>() != d)
        fail(ErrorCode::Parse, "'d' does not match the theta matrix");
    MhnParams p{Matrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))};
    for (std::size_t i = 0; i < d; ++i) {
        const auto row = real_vector(rows[i], "theta row");
        if (static_cast<std::size_t>(row.size()) != d)
            fail(ErrorCode::Parse, "theta must be square");
        p.theta.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    std::optional<std::vector<std::size_t>> x0;
    if (j.contains("x0"))
        x0 = index_list(j["x0"], "x0");
    return from_mhn(p, x0);
}

SanModel san_from_json(const json& j) {
    SanModel m;
    if (!j.contains("sizes"))
        fail(ErrorCode::Parse, "san model needs 'sizes'");
    m.sizes = index_list(j["sizes"], "sizes");
    const auto d = m.sizes.size();

    const json& trans = j.contains("transitions") ? j["transitions"] : json::array();
    if (!trans.is_array() || trans.size() != d)
        fail(ErrorCode::Parse, "'transitions' must list one transition set per automaton");
    const json& theta = j.contains("theta") ? j["theta"] : json::object();
    if (!theta.is_object())
        fail(ErrorCode::Parse, "'theta' must be an object keyed by \"<automaton>:<from>-><to>\"");

    std::size_t used_keys = 0;
    m.transitions.resize(d);
    for (std::size_t nu = 0; nu < d; ++nu) {
        if (!trans[nu].is_array())
            fail(ErrorCode::Parse, "transition set must be an array of [from, to] pairs");
        for (const auto& pair : trans[nu]) {
            const auto ft = index_list(pair, "transition");
            if (ft.size() != 2)
                fail(ErrorCode::Parse, "transition must be a [from, to] pair");
            Transition tr;
            tr.from = ft[0];
            tr.to = ft[1];
            const auto key = transition_key(nu, tr.from, tr.to);
            if (theta.contains(key)) {
                ++used_keys;
                const auto& vecs = theta[key];
                if (!vecs.is_array())
                    fail(ErrorCode::Parse, "theta entry '" + key + "' must be a list of vectors");
                for (const auto& v : vecs)
                    tr.theta.push_back(real_vector(v, "theta vector"));
            } else {
                for (auto n : m.sizes)
                    tr.theta.push_back(Vector::Ones(static_cast<Eigen::Index>(n)));
            }
            m.transitions[nu].push_back(std::move(tr));
        }
    }
    if (used_keys != theta.size())
        fail(ErrorCode::Parse, "'theta' has entries for transitions that are not listed");

    m.x0 = j.contains("x0") ? index_list(j["x0"], "x0") : std::vector<std::size_t>(d, 0);
    return m;
}

}  // namespace

SanModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        fail(ErrorCode::Parse, "model must be an object with a 'kind' field");
    const auto kind = j["kind"].get<std::string>();
    SanModel m;
    try {
        if (kind == "mhn")
            m = mhn_from_json(j);
        else if (kind == "san")
            m = san_from_json(j);
        else
            fail(ErrorCode::Parse, "unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, e.what());
    }
    return m;
}

SanModel parse_model_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, e.what());
    }
    return model_from_json(j);
}

nlohmann::json model_to_json(const SanModel& m) {
    json j;
    j["kind"] = "san";
    j["sizes"] = m.sizes;
    j["transitions"] = json::array();
    j["theta"] = json::object();
    for (std::size_t nu = 0; nu < m.transitions.size(); ++nu) {
        json set = json::array();
        for (const auto& tr : m.transitions[nu]) {
            set.push_back({tr.from, tr.to});
            json vecs = json::array();
            for (const auto& v : tr.theta)
                vecs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
            j["theta"][transition_key(nu, tr.from, tr.to)] = std::move(vecs);
        }
        j["transitions"].push_back(std::move(set));
    }
    j["x0"] = m.x0;
    return j;
}

MhnParams parse_mhn_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                if (cell.find_first_not_of(" \t\r", pos) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                fail(ErrorCode::Parse, "bad number '" + cell + "' in MHN csv");
            }
        }
        rows.push_back(std::move(row));
    }
    const auto d = rows.size();
    MhnParams p{Matrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))};
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d)
            fail(ErrorCode::Parse, "MHN csv must have d rows of d values");
        for (std::size_t k = 0; k < d; ++k)
            p.theta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    require_valid(p);
    return p;
}

SanModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::Io, "cannot open model file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    return csv ? from_mhn(parse_mhn_csv(buf.str())) : parse_model_json(buf.str());
}

}  // namespace sanlr

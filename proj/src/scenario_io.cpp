#include "evacsim/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace evacsim {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* name : allowed) ok |= key == name;
        if (!ok)
            throw std::invalid_argument(std::string("unknown key \"") + key +
                                        "\" in " + where);
    }
}

double num_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

json hut_to_json(const HutProfile& profile) {
    json j;
    if (profile.is_constant()) {
        j["constant"] = profile.knots().front().second;
    } else {
        json points = json::array();
        for (const auto& [hour, value] : profile.knots())
            points.push_back({hour, value});
        j["points"] = points;
    }
    return j;
}

HutProfile hut_from_json(const json& j) {
    check_keys(j, "traffic.hut_profile", {"constant", "points"});
    if (j.contains("constant")) return HutProfile::constant(j.at("constant").get<double>());
    if (!j.contains("points"))
        throw std::invalid_argument("hut_profile needs \"constant\" or \"points\"");
    std::vector<std::pair<double, double>> knots;
    for (const auto& p : j.at("points"))
        knots.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return HutProfile::piecewise_linear(std::move(knots));
}

}  // namespace

ScenarioParams scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
    }
    check_keys(j, "scenario",
               {"name", "spatial", "traffic", "protection", "processors", "net",
                "handover", "service", "db", "distance_x", "eval_hour",
                "report_evacuation_interval"});
    ScenarioParams scn;
    scn.name = j.value("name", std::string("scenario"));

    if (j.contains("spatial")) {
        const json& s = j.at("spatial");
        check_keys(s, "spatial",
                   {"lambda_s", "lambda_p", "r_p", "region_width", "region_height"});
        scn.spatial.lambda_s = num_or(s, "lambda_s", scn.spatial.lambda_s);
        scn.spatial.lambda_p = num_or(s, "lambda_p", scn.spatial.lambda_p);
        scn.spatial.r_p = num_or(s, "r_p", scn.spatial.r_p);
        scn.spatial.region_width = num_or(s, "region_width", scn.spatial.region_width);
        scn.spatial.region_height = num_or(s, "region_height", scn.spatial.region_height);
    }
    if (j.contains("traffic")) {
        const json& t = j.at("traffic");
        check_keys(t, "traffic",
                   {"M", "N", "E_B", "hut_profile", "n_channels", "p_evac",
                    "ota_rate", "channel_zipf_s"});
        scn.traffic.tv_receivers = num_or(t, "M", scn.traffic.tv_receivers);
        scn.traffic.secondary_links = num_or(t, "N", scn.traffic.secondary_links);
        scn.traffic.mean_holding_time_s = num_or(t, "E_B", scn.traffic.mean_holding_time_s);
        if (t.contains("hut_profile"))
            scn.traffic.hut_profile = hut_from_json(t.at("hut_profile"));
        scn.traffic.n_channels =
            static_cast<int>(num_or(t, "n_channels", scn.traffic.n_channels));
        scn.traffic.p_evac = num_or(t, "p_evac", scn.traffic.p_evac);
        scn.traffic.ota_rate = num_or(t, "ota_rate", scn.traffic.ota_rate);
        scn.traffic.channel_zipf_s =
            num_or(t, "channel_zipf_s", scn.traffic.channel_zipf_s);
    }
    if (j.contains("protection")) {
        const json& p = j.at("protection");
        check_keys(p, "protection", {"delta_max", "o_max"});
        scn.protection.delta_max_ms = num_or(p, "delta_max", scn.protection.delta_max_ms);
        scn.protection.o_max = num_or(p, "o_max", scn.protection.o_max);
    }
    scn.processors = static_cast<int>(num_or(j, "processors", scn.processors));
    if (j.contains("net")) {
        const json& n = j.at("net");
        check_keys(n, "net", {"a", "b", "sigma2", "rtt_override", "rtt_alt"});
        scn.net.a_ms_per_mile = num_or(n, "a", scn.net.a_ms_per_mile);
        scn.net.b_ms = num_or(n, "b", scn.net.b_ms);
        scn.net.sigma2 = num_or(n, "sigma2", scn.net.sigma2);
        scn.net.rtt_override_ms = num_or(n, "rtt_override", scn.net.rtt_override_ms);
        scn.net.rtt_alt_ms = num_or(n, "rtt_alt", scn.net.rtt_alt_ms);
    }
    if (j.contains("handover")) {
        const json& h = j.at("handover");
        check_keys(h, "handover", {"f", "l_f"});
        scn.handover.f_ms = num_or(h, "f", scn.handover.f_ms);
        scn.handover.frame_ms = num_or(h, "l_f", scn.handover.frame_ms);
    }
    if (j.contains("service")) {
        const json& s = j.at("service");
        check_keys(s, "service", {"g", "h", "l_mean", "l_var", "tau", "law"});
        scn.service.g_ms = num_or(s, "g", scn.service.g_ms);
        scn.service.h_ms = num_or(s, "h", scn.service.h_ms);
        scn.service.l_mean_ms = num_or(s, "l_mean", scn.service.l_mean_ms);
        scn.service.l_var = num_or(s, "l_var", scn.service.l_var);
        scn.service.tau_ms = num_or(s, "tau", scn.service.tau_ms);
        const std::string law = s.value("law", std::string("general"));
        if (law == "general") {
            scn.service.law = ServiceTimeParams::Law::general;
        } else if (law == "exponential") {
            scn.service.law = ServiceTimeParams::Law::exponential;
        } else {
            throw std::invalid_argument("service.law must be general or exponential");
        }
    }
    if (j.contains("db")) {
        const json& d = j.at("db");
        check_keys(d, "db", {"query_ms", "records_per_job", "response_override_ms"});
        scn.db.query_ms = num_or(d, "query_ms", scn.db.query_ms);
        scn.db.records_per_job = num_or(d, "records_per_job", scn.db.records_per_job);
        scn.db.response_override_ms =
            num_or(d, "response_override_ms", scn.db.response_override_ms);
    }
    scn.distance_x_miles = num_or(j, "distance_x", scn.distance_x_miles);
    scn.eval_hour = num_or(j, "eval_hour", scn.eval_hour);
    scn.report_evacuation_interval =
        j.value("report_evacuation_interval", scn.report_evacuation_interval);

    scn.validate();
    return scn;
}

std::string scenario_to_json(const ScenarioParams& scn) {
    json j;
    j["name"] = scn.name;
    j["spatial"] = {{"lambda_s", scn.spatial.lambda_s},
                    {"lambda_p", scn.spatial.lambda_p},
                    {"r_p", scn.spatial.r_p},
                    {"region_width", scn.spatial.region_width},
                    {"region_height", scn.spatial.region_height}};
    j["traffic"] = {{"M", scn.traffic.tv_receivers},
                    {"N", scn.traffic.secondary_links},
                    {"E_B", scn.traffic.mean_holding_time_s},
                    {"hut_profile", hut_to_json(scn.traffic.hut_profile)},
                    {"n_channels", scn.traffic.n_channels},
                    {"p_evac", scn.traffic.p_evac},
                    {"ota_rate", scn.traffic.ota_rate},
                    {"channel_zipf_s", scn.traffic.channel_zipf_s}};
    j["protection"] = {{"delta_max", scn.protection.delta_max_ms},
                       {"o_max", scn.protection.o_max}};
    j["processors"] = scn.processors;
    json net = {{"a", scn.net.a_ms_per_mile},
                {"b", scn.net.b_ms},
                {"sigma2", scn.net.sigma2}};
    if (scn.net.has_override()) net["rtt_override"] = scn.net.rtt_override_ms;
    if (scn.net.rtt_alt_ms >= 0.0) net["rtt_alt"] = scn.net.rtt_alt_ms;
    j["net"] = net;
    j["handover"] = {{"f", scn.handover.f_ms}, {"l_f", scn.handover.frame_ms}};
    j["service"] = {{"g", scn.service.g_ms},
                    {"h", scn.service.h_ms},
                    {"l_mean", scn.service.l_mean_ms},
                    {"l_var", scn.service.l_var},
                    {"tau", scn.service.tau_ms},
                    {"law", scn.service.law == ServiceTimeParams::Law::general
                                ? "general"
                                : "exponential"}};
    json db = {{"query_ms", scn.db.query_ms},
               {"records_per_job", scn.db.records_per_job}};
    if (scn.db.has_override()) db["response_override_ms"] = scn.db.response_override_ms;
    j["db"] = db;
    j["distance_x"] = scn.distance_x_miles;
    j["eval_hour"] = scn.eval_hour;
    j["report_evacuation_interval"] = scn.report_evacuation_interval;
    return j.dump(2) + "\n";
}

ScenarioParams load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json(buffer.str());
}

void save_scenario(const ScenarioParams& scn, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_json(scn);
}

}  // namespace evacsim

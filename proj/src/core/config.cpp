#include "xlate/core/config.hpp"

#include "xlate/util/fs.hpp"
#include "xlate/util/hash.hpp"
#include "xlate/util/strings.hpp"

#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

namespace xlate::core {

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError("config: " + where + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ConfigError("config: " + where + " must be a list of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

LanguageProfile parse_profile(const nlohmann::json& j) {
    static const std::set<std::string> allowed = {
        "language",        "file_extensions", "lsp_launch",
        "build_command",   "test_command",    "coverage_command",
        "test_output_format",
        "stub_markers",    "comment_syntax",  "test_globs",
        "test_prefixes",   "test_suffixes",   "manifest_globs",
        "diagnostics_settle_seconds", "diagnostics_cap_seconds"};
    if (!j.is_object()) throw ConfigError("config: language profile must be an object");
    reject_unknown_keys(j, allowed, "language profile");

    LanguageProfile p;
    p.language = j.at("language").get<std::string>();
    if (p.language.empty()) throw ConfigError("config: profile language must be nonempty");
    p.file_extensions = string_list(j.at("file_extensions"), "file_extensions");
    if (p.file_extensions.empty()) {
        throw ConfigError("config: profile '" + p.language + "' has no file_extensions");
    }
    if (j.contains("lsp_launch")) p.lsp_launch = string_list(j["lsp_launch"], "lsp_launch");
    if (j.contains("build_command")) p.build_command = string_list(j["build_command"], "build_command");
    if (j.contains("test_command")) p.test_command = string_list(j["test_command"], "test_command");
    if (j.contains("coverage_command")) {
        p.coverage_command = string_list(j["coverage_command"], "coverage_command");
    }
    if (j.contains("test_output_format")) {
        p.test_output_format = j["test_output_format"].get<std::string>();
        if (p.test_output_format != "jsonl" && p.test_output_format != "tap" &&
            p.test_output_format != "go-test-json") {
            throw ConfigError("config: profile '" + p.language +
                              "' has unsupported test_output_format '" + p.test_output_format +
                              "' (expected jsonl, tap, or go-test-json)");
        }
    }
    if (j.contains("stub_markers")) p.stub_markers = string_list(j["stub_markers"], "stub_markers");
    if (j.contains("comment_syntax")) {
        const auto& cs = j["comment_syntax"];
        reject_unknown_keys(cs, {"line", "block_open", "block_close"}, "comment_syntax");
        if (cs.contains("line")) p.line_comment = cs["line"].get<std::string>();
        if (cs.contains("block_open")) p.block_comment_open = cs["block_open"].get<std::string>();
        if (cs.contains("block_close")) p.block_comment_close = cs["block_close"].get<std::string>();
    }
    if (j.contains("test_globs")) p.test_globs = string_list(j["test_globs"], "test_globs");
    if (j.contains("test_prefixes")) p.test_prefixes = string_list(j["test_prefixes"], "test_prefixes");
    if (j.contains("test_suffixes")) p.test_suffixes = string_list(j["test_suffixes"], "test_suffixes");
    if (j.contains("manifest_globs")) {
        p.manifest_globs = string_list(j["manifest_globs"], "manifest_globs");
    }
    if (j.contains("diagnostics_settle_seconds")) {
        p.diagnostics_settle_seconds = j["diagnostics_settle_seconds"].get<double>();
    }
    if (j.contains("diagnostics_cap_seconds")) {
        p.diagnostics_cap_seconds = j["diagnostics_cap_seconds"].get<double>();
    }

    // Command templates may only reference placeholders we know how to fill.
    auto check_placeholders = [&](const std::vector<std::string>& tmpl, const std::string& name) {
        for (const auto& arg : tmpl) {
            size_t pos = 0;
            while ((pos = arg.find('{', pos)) != std::string::npos) {
                size_t end = arg.find('}', pos);
                if (end == std::string::npos) break;
                std::string ph = arg.substr(pos, end - pos + 1);
                if (ph != "{root}" && ph != "{file}" && ph != "{filter}") {
                    throw ConfigError("config: profile '" + p.language + "' " + name +
                                      " references unknown placeholder " + ph);
                }
                pos = end + 1;
            }
        }
    };
    check_placeholders(p.lsp_launch, "lsp_launch");
    check_placeholders(p.build_command, "build_command");
    check_placeholders(p.test_command, "test_command");
    check_placeholders(p.coverage_command, "coverage_command");
    return p;
}

TestConventions parse_conventions(const nlohmann::json& j) {
    static const std::set<std::string> allowed = {"test_globs", "test_prefixes",
                                                  "test_suffixes", "manifest_globs"};
    reject_unknown_keys(j, allowed, "test_conventions");
    TestConventions tc;
    if (j.contains("test_globs")) tc.test_globs = string_list(j["test_globs"], "test_globs");
    if (j.contains("test_prefixes")) tc.test_prefixes = string_list(j["test_prefixes"], "test_prefixes");
    if (j.contains("test_suffixes")) tc.test_suffixes = string_list(j["test_suffixes"], "test_suffixes");
    if (j.contains("manifest_globs")) {
        tc.manifest_globs = string_list(j["manifest_globs"], "manifest_globs");
    }
    return tc;
}

} // namespace

const LanguageProfile& Config::profile(const LanguageId& id) const {
    auto it = languages.find(id);
    if (it == languages.end()) throw ConfigError("config: no profile for language '" + id + "'");
    return it->second;
}

std::vector<std::string> Config::effective_test_globs(const LanguageProfile& p) const {
    return p.test_globs.empty() ? test_conventions.test_globs : p.test_globs;
}
std::vector<std::string> Config::effective_test_prefixes(const LanguageProfile& p) const {
    return p.test_prefixes.empty() ? test_conventions.test_prefixes : p.test_prefixes;
}
std::vector<std::string> Config::effective_test_suffixes(const LanguageProfile& p) const {
    return p.test_suffixes.empty() ? test_conventions.test_suffixes : p.test_suffixes;
}
std::vector<std::string> Config::effective_manifest_globs(const LanguageProfile& p) const {
    return p.manifest_globs.empty() ? test_conventions.manifest_globs : p.manifest_globs;
}

Config parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown_keys(j, {"languages", "rates", "budget", "test_conventions"}, "top level");

    Config c;
    if (j.contains("languages")) {
        if (!j["languages"].is_array()) throw ConfigError("config: languages must be a list");
        for (const auto& pj : j["languages"]) {
            LanguageProfile p = parse_profile(pj);
            if (c.languages.count(p.language)) {
                throw ConfigError("config: duplicate language profile '" + p.language + "'");
            }
            c.languages[p.language] = std::move(p);
        }
    }
    if (j.contains("rates")) {
        const auto& r = j["rates"];
        reject_unknown_keys(r, {"input_per_token", "output_per_token"}, "rates");
        if (r.contains("input_per_token")) c.rates.input_per_token = r["input_per_token"].get<double>();
        if (r.contains("output_per_token")) c.rates.output_per_token = r["output_per_token"].get<double>();
        if (c.rates.input_per_token < 0 || c.rates.output_per_token < 0) {
            throw ConfigError("config: rates must be nonnegative");
        }
    }
    if (j.contains("budget")) {
        const auto& b = j["budget"];
        reject_unknown_keys(b, {"agent_timeout", "max_iterations"}, "budget");
        if (b.contains("agent_timeout")) c.budget.agent_timeout_seconds = b["agent_timeout"].get<double>();
        if (b.contains("max_iterations")) c.budget.max_iterations = b["max_iterations"].get<int>();
        if (c.budget.agent_timeout_seconds <= 0) {
            throw ConfigError("config: budget.agent_timeout must be > 0");
        }
        if (c.budget.max_iterations < 1) {
            throw ConfigError("config: budget.max_iterations must be >= 1");
        }
    }
    if (j.contains("test_conventions")) c.test_conventions = parse_conventions(j["test_conventions"]);
    return c;
}

Config load_config_file(const std::string& path) {
    std::string text;
    try {
        text = util::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

Config default_config() {
    nlohmann::json j = {
        {"languages",
         {{{"language", "go"},
           {"file_extensions", {".go"}},
           {"lsp_launch", {"gopls", "serve"}},
           {"build_command", {"go", "build", "./..."}},
           {"test_command", {"go", "test", "-json", "./..."}},
           {"test_output_format", "go-test-json"},
           {"stub_markers", {"panic(\"not implemented\")", "TODO: implement"}},
           {"comment_syntax", {{"line", "//"}, {"block_open", "/*"}, {"block_close", "*/"}}},
           {"test_suffixes", {"_test"}},
           {"manifest_globs", {"go.mod", "go.sum"}}},
          {{"language", "python"},
           {"file_extensions", {".py"}},
           {"lsp_launch", {"pylsp"}},
           {"build_command", {"python3", "-m", "compileall", "-q", "{root}"}},
           {"test_command", {"python3", "{root}/runtests.py", "--root", "{root}"}},
           {"coverage_command",
            {"python3", "{root}/runtests.py", "--root", "{root}", "--coverage"}},
           {"stub_markers", {"raise NotImplementedError", "TODO: implement"}},
           {"comment_syntax", {{"line", "#"}}},
           {"test_prefixes", {"test_"}},
           {"test_suffixes", {"_test"}},
           {"manifest_globs", {"requirements.txt", "pyproject.toml", "setup.py"}}}}},
        {"budget", {{"agent_timeout", 5000}, {"max_iterations", 5}}},
    };
    return parse_config(j);
}

nlohmann::json config_to_json(const Config& c) {
    nlohmann::json langs = nlohmann::json::array();
    for (const auto& [_, p] : c.languages) {
        nlohmann::json pj = {
            {"language", p.language},
            {"file_extensions", p.file_extensions},
            {"lsp_launch", p.lsp_launch},
            {"build_command", p.build_command},
            {"test_command", p.test_command},
            {"coverage_command", p.coverage_command},
            {"test_output_format", p.test_output_format},
            {"stub_markers", p.stub_markers},
            {"comment_syntax",
             {{"line", p.line_comment},
              {"block_open", p.block_comment_open},
              {"block_close", p.block_comment_close}}},
            {"test_globs", p.test_globs},
            {"test_prefixes", p.test_prefixes},
            {"test_suffixes", p.test_suffixes},
            {"manifest_globs", p.manifest_globs},
            {"diagnostics_settle_seconds", p.diagnostics_settle_seconds},
            {"diagnostics_cap_seconds", p.diagnostics_cap_seconds},
        };
        langs.push_back(pj);
    }
    return {
        {"languages", langs},
        {"rates",
         {{"input_per_token", c.rates.input_per_token},
          {"output_per_token", c.rates.output_per_token}}},
        {"budget",
         {{"agent_timeout", c.budget.agent_timeout_seconds},
          {"max_iterations", c.budget.max_iterations}}},
        {"test_conventions",
         {{"test_globs", c.test_conventions.test_globs},
          {"test_prefixes", c.test_conventions.test_prefixes},
          {"test_suffixes", c.test_conventions.test_suffixes},
          {"manifest_globs", c.test_conventions.manifest_globs}}},
    };
}

std::string config_hash(const Config& c) {
    // nlohmann::json::dump emits object keys in sorted order, so this is a
    // canonical serialization.
    return util::sha256_hex(config_to_json(c).dump());
}

std::vector<std::string> expand_command(const std::vector<std::string>& tmpl,
                                        const std::string& root,
                                        const std::string& file,
                                        const std::string& filter) {
    std::string abs_root = std::filesystem::absolute(root).lexically_normal().string();
    std::vector<std::string> out;
    out.reserve(tmpl.size());
    for (const auto& arg : tmpl) {
        std::string a = arg;
        a = util::replace_all(a, "{root}", abs_root);
        a = util::replace_all(a, "{file}", file);
        a = util::replace_all(a, "{filter}", filter);
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace xlate::core

#include "tw/report.hpp"

#include <filesystem>
#include <fstream>

#include "tw/cantor.hpp"

namespace tw {

uint64_t content_digest(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Report::Report(std::string command, const nlohmann::json& config) {
  doc_["schema"] = "tw-report/1";
  doc_["command"] = std::move(command);
  doc_["config"] = config;
  doc_["inputs_digest"] = content_digest(config.dump());
  doc_["results"] = nlohmann::json::object();
  doc_["tables"] = nlohmann::json::object();
}

void Report::add_result(const std::string& key, const nlohmann::json& value) {
  doc_["results"][key] = value;
}

void Report::add_invariant(const std::string& name, bool pass, double value, double bound) {
  verdicts_.push_back({name, pass, value, bound});
  doc_["invariants"].push_back(
      {{"name", name}, {"pass", pass}, {"value", value}, {"bound", bound}});
}

void Report::add_table(const std::string& name, const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
  nlohmann::json t;
  t["columns"] = columns;
  t["rows"] = rows;
  doc_["tables"][name] = t;
}

bool Report::all_invariants_pass() const {
  for (const auto& v : verdicts_)
    if (!v.pass) return false;
  return true;
}

std::string Report::to_json_text() const { return doc_.dump(2); }

void Report::write(const std::string& out_dir, bool with_csv) const {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::string cmd = doc_["command"].get<std::string>();
  std::ofstream(fs::path(out_dir) / (cmd + "-report.json")) << to_json_text() << "\n";
  if (!with_csv || !doc_.contains("tables")) return;
  for (const auto& [name, table] : doc_["tables"].items()) {
    std::ofstream csv(fs::path(out_dir) / (cmd + "-" + name + ".csv"));
    const auto& cols = table["columns"];
    for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i].get<std::string>();
    csv << "\n";
    for (const auto& row : table["rows"]) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) csv << ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", row[i].get<double>());
        csv << buf;
      }
      csv << "\n";
    }
  }
}

WeightPair builtin_pair(const std::string& name) {
  auto split = name.find(':');
  std::string base = name.substr(0, split);
  int depth = split == std::string::npos ? 6 : std::stoi(name.substr(split + 1));
  if (base == "cantor") {
    SigmaPair p = build_sigma_pair(depth);
    return {p.sigma, cantor_weight(depth), name};
  }
  if (base == "cantor-prime") {
    SigmaPair p = build_sigma_pair(depth);
    return {p.sigma_prime, cantor_weight(depth), name};
  }
  if (base == "lebesgue") return {Weight::lebesgue(0, 1, "sigma"), Weight::lebesgue(0, 1, "w"), name};
  if (base == "mw-failure")  // compact truncation of the classical pair
    return {Weight::density(Interval(0.0, 1.0), {0, 1, 0, 0}, "x dx on [0,1]"),
            Weight::point_mass(0.0, 1.0, Rat(0)), name};
  if (base == "mw-tail") {
    DensityPiece tail;
    tail.kind = PieceKind::TailRight;
    tail.iv.lo = 0.0;
    tail.iv.hi = 1.0;  // unused side
    tail.coef = {0, 1, 0, 0};
    return {Weight({}, {tail}, "x dx on [0,inf)"), Weight::point_mass(0.0, 1.0, Rat(0)), name};
  }
  if (base == "log-compact") {
    DensityPiece p;
    p.kind = PieceKind::XOverLogSq;
    p.iv = Interval(0.0, 1.0 / 3.0);
    return {Weight({}, {p}, "x/ln^2 x on (0,1/3)"), Weight::point_mass(0.0, 1.0, Rat(0)), name};
  }
  if (base == "tail-compact") {
    DensityPiece tail;
    tail.kind = PieceKind::TailRight;
    tail.iv.lo = 1.0;
    tail.iv.hi = 2.0;  // unused side
    tail.coef = {1, 0, 0, 0};
    return {Weight({}, {tail}, "dx on (1,inf)"), Weight::point_mass(0.0, 1.0, Rat(0)), name};
  }
  fail(Err::ConfigInvalid, "unknown builtin pair '" + name + "'");
}

}  // namespace tw

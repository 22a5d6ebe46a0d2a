#include "wobble/runlog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wobble/errors.hpp"

namespace wobble {

using nlohmann::json;

json header_to_json(const RunHeader& h) {
  json roots = json::array();
  for (const auto& g : h.roots) roots.push_back(g.to_string());
  return json{{"type", "header"},
              {"format", kRunLogFormat},
              {"experiment", h.experiment},
              {"condition", h.condition},
              {"seed", h.seed},
              {"config", h.config},
              {"config_hash", h.config_hash},
              {"adult_body_length", h.adult_body_length},
              {"roots", roots},
              {"epochs", h.planned_epochs}};
}

RunHeader header_from_json(const json& j) {
  if (j.value("type", "") != "header") throw LogError("first line is not a run header");
  if (j.value("format", "") != kRunLogFormat)
    throw LogError("unsupported run log format '" + j.value("format", "") + "'");
  RunHeader h;
  h.experiment = j.at("experiment").get<std::string>();
  h.condition = j.at("condition").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.config = j.at("config");
  h.config_hash = j.at("config_hash").get<std::string>();
  h.adult_body_length = j.at("adult_body_length").get<double>();
  for (const auto& g : j.at("roots")) h.roots.push_back(Genome::parse(g.get<std::string>()));
  h.planned_epochs = j.at("epochs").get<int>();
  return h;
}

json epoch_to_json(const EpochRecord& r) {
  json genomes = json::array(), fitness = json::array(), displacement = json::array(),
       parents = json::array(), diverged = json::array();
  for (std::size_t i = 0; i < r.evaluations.size(); ++i) {
    const auto& ev = r.evaluations[i];
    genomes.push_back(ev.genome.to_string());
    fitness.push_back(ev.fitness);
    displacement.push_back(ev.displacement);
    parents.push_back(ev.parent);
    if (ev.diverged) diverged.push_back(i);
  }
  return json{{"type", "epoch"},
              {"epoch", r.epoch},
              {"scales", {r.scales.mass, r.scales.stiffness, r.scales.size}},
              {"genomes", genomes},
              {"fitness", fitness},
              {"displacement", displacement},
              {"parent", parents},
              {"diverged", diverged},
              {"kept", r.kept}};
}

EpochRecord epoch_from_json(const json& j) {
  if (j.value("type", "") != "epoch") throw LogError("expected an epoch record");
  EpochRecord r;
  r.epoch = j.at("epoch").get<int>();
  const auto& s = j.at("scales");
  r.scales = {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()};
  const auto& genomes = j.at("genomes");
  const auto& fitness = j.at("fitness");
  const auto& displacement = j.at("displacement");
  const auto& parents = j.at("parent");
  const std::size_t n = genomes.size();
  if (fitness.size() != n || displacement.size() != n || parents.size() != n)
    throw LogError("epoch " + std::to_string(r.epoch) + ": per-trial arrays differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    Evaluation ev;
    ev.genome = Genome::parse(genomes[i].get<std::string>());
    ev.fitness = fitness[i].get<double>();
    ev.displacement = displacement[i].get<double>();
    ev.parent = parents[i].get<int>();
    r.evaluations.push_back(std::move(ev));
  }
  for (const auto& d : j.at("diverged")) {
    const auto i = d.get<std::size_t>();
    if (i >= n) throw LogError("epoch " + std::to_string(r.epoch) + ": diverged index out of range");
    r.evaluations[i].diverged = true;
  }
  r.kept = j.at("kept").get<std::vector<int>>();
  return r;
}

namespace {

// Splits a file into lines; `terminated` tells whether the last line ended
// with a newline.
std::vector<std::string> read_lines(const std::filesystem::path& path, bool& terminated) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open run log " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      terminated = false;
      return lines;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  terminated = true;
  return lines;
}

}  // namespace

RunLog read_runlog(const std::filesystem::path& path, bool allow_partial) {
  bool terminated = true;
  std::vector<std::string> lines = read_lines(path, terminated);
  if (!terminated) {
    if (!allow_partial) throw LogError(path.string() + ": truncated final line");
    lines.pop_back();
  }
  if (lines.empty()) throw LogError(path.string() + ": empty run log");

  RunLog log;
  try {
    log.header = header_from_json(json::parse(lines.front()));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      EpochRecord r = epoch_from_json(json::parse(lines[i]));
      const int expected = static_cast<int>(log.epochs.size());
      if (r.epoch != expected)
        throw LogError("missing epoch " + std::to_string(expected) + " (found epoch " +
                       std::to_string(r.epoch) + ")");
      log.epochs.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw LogError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw LogError(path.string() + ": " + e.what());
  } catch (const LogError& e) {
    throw LogError(path.string() + ": " + e.what());
  }
  if (static_cast<int>(log.epochs.size()) > log.header.planned_epochs)
    throw LogError(path.string() + ": more epochs than the header plans");
  return log;
}

std::uintmax_t valid_prefix_bytes(const std::filesystem::path& path) {
  bool terminated = true;
  const auto lines = read_lines(path, terminated);
  std::uintmax_t bytes = 0;
  const std::size_t whole = terminated ? lines.size() : lines.size() - 1;
  for (std::size_t i = 0; i < whole; ++i) bytes += lines[i].size() + 1;
  return bytes;
}

void write_runlog(const std::filesystem::path& path, const RunLog& log) {
  RunLogWriter w(path, log.header);
  for (const auto& r : log.epochs) w.append(r);
}

RunLogWriter::RunLogWriter(const std::filesystem::path& path, const RunHeader& header)
    : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write run log " + path.string());
  out_ << header_to_json(header).dump() << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write failed for " + path.string());
}

RunLogWriter::RunLogWriter(const std::filesystem::path& path, std::uintmax_t keep_bytes)
    : path_(path) {
  std::filesystem::resize_file(path, keep_bytes);
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot append to run log " + path.string());
}

void RunLogWriter::append(const EpochRecord& record) {
  out_ << epoch_to_json(record).dump() << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write failed for " + path_.string());
}

void check_runlog(const RunLog& log, int kept) {
  const auto fail = [](int epoch, const std::string& what) {
    throw LogError("epoch " + std::to_string(epoch) + ": " + what);
  };
  const int n_roots = static_cast<int>(log.header.roots.size());
  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    const auto& r = log.epochs[e];
    const int prev_size =
        e == 0 ? n_roots : static_cast<int>(log.epochs[e - 1].evaluations.size());
    for (const auto& ev : r.evaluations) {
      if (ev.parent < 0 || ev.parent >= prev_size) fail(r.epoch, "parent index out of range");
    }
    if (r.kept != select_kept(r.evaluations, kept)) fail(r.epoch, "kept ids are not the top members");
    if (e + 1 < log.epochs.size()) {
      const auto& next = log.epochs[e + 1];
      for (std::size_t k = 0; k < r.kept.size(); ++k) {
        const auto& carried = next.evaluations.at(k);
        if (carried.parent != r.kept[k] ||
            !(carried.genome == r.evaluations[static_cast<std::size_t>(r.kept[k])].genome))
          fail(next.epoch, "kept member not carried over unchanged");
      }
    }
  }
}

}  // namespace wobble

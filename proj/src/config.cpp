#include "sar/config.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace sar::config {

namespace {

class Parser
{
public:
  explicit Parser(const std::string& text) : text_(text) {}

  Document run()
  {
    Document doc;
    std::string section;
    doc[section];
    while (true) {
      skip_blank_lines();
      if (at_end())
        break;
      if (peek() == '[') {
        ++pos_;
        skip_spaces();
        section = read_key();
        skip_spaces();
        expect(']');
        if (doc.count(section) && section != "")
          throw ConfigError("duplicate section [" + section + "]", line_);
        doc[section];
        end_of_line();
        continue;
      }
      const int key_line = line_;
      const std::string key = read_key();
      skip_spaces();
      expect('=');
      skip_spaces();
      Value v = read_value();
      v.line = key_line;
      auto& table = doc[section];
      if (table.count(key))
        throw ConfigError("duplicate key '" + key + "'", key_line);
      table.emplace(key, std::move(v));
      end_of_line();
    }
    return doc;
  }

private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_spaces()
  {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
      ++pos_;
  }

  void skip_comment()
  {
    if (peek() == '#')
      while (!at_end() && peek() != '\n')
        ++pos_;
  }

  void skip_blank_lines()
  {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      return;
    }
  }

  /// Whitespace, comments, and newlines inside arrays.
  void skip_insignificant()
  {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      return;
    }
  }

  void end_of_line()
  {
    skip_spaces();
    skip_comment();
    if (at_end())
      return;
    if (peek() != '\n')
      throw ConfigError(std::string("unexpected '") + peek() + "' after value", line_);
    ++pos_;
    ++line_;
  }

  void expect(char c)
  {
    if (peek() != c)
      throw ConfigError(std::string("expected '") + c + "'" + (at_end() ? " before end of file" : ", found '" + std::string(1, peek()) + "'"),
                        line_);
    ++pos_;
  }

  std::string read_key()
  {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      ++pos_;
    if (pos_ == start)
      throw ConfigError("expected a key", line_);
    return text_.substr(start, pos_ - start);
  }

  Value read_value()
  {
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '[') {
      ++pos_;
      Array items;
      skip_insignificant();
      while (peek() != ']') {
        items.push_back(read_value());
        skip_insignificant();
        if (peek() == ',') {
          ++pos_;
          skip_insignificant();
        } else if (peek() != ']') {
          throw ConfigError("expected ',' or ']' in array", line_);
        }
      }
      ++pos_;
      v.data = std::move(items);
    } else if (c == '"') {
      ++pos_;
      std::string s;
      while (!at_end() && peek() != '"' && peek() != '\n')
        s += text_[pos_++];
      expect('"');
      v.data = std::move(s);
    } else if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      v.data = true;
    } else if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      v.data = false;
    } else {
      const char* first = text_.data() + pos_;
      const char* last = text_.data() + text_.size();
      if (*first == '+')
        ++first;
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(first, last, x);
      if (ec != std::errc() || ptr == first)
        throw ConfigError("expected a number, string, boolean, or array", line_);
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      v.data = x;
    }
    return v;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

/// Typed access to one section with field-qualified error messages.
class Section
{
public:
  Section(const Document& doc, const std::string& name) : name_(name)
  {
    const auto it = doc.find(name);
    if (it != doc.end())
      table_ = &it->second;
  }

  bool present() const { return table_ != nullptr; }
  bool has(const std::string& key) const { return table_ && table_->count(key); }

  void require_section() const
  {
    if (!table_)
      throw ConfigError("missing section [" + name_ + "]");
  }

  /// Rejects keys outside `known` so typos do not go unnoticed.
  void allow_only(std::initializer_list<const char*> known) const
  {
    if (!table_)
      return;
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : *table_)
      if (!allowed.count(key))
        throw ConfigError("unknown field " + field(key), value.line);
  }

  const Value& get(const std::string& key) const
  {
    if (!has(key))
      throw ConfigError("missing field " + field(key));
    return table_->at(key);
  }

  double number(const std::string& key) const { return as_number(get(key), field(key)); }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) const
  {
    if (!has(key))
      return fallback;
    const Value& v = get(key);
    if (const auto* b = std::get_if<bool>(&v.data))
      return *b;
    throw ConfigError(field(key) + " must be true or false", v.line);
  }

  std::string string(const std::string& key, const std::string& fallback) const
  {
    if (!has(key))
      return fallback;
    const Value& v = get(key);
    if (const auto* s = std::get_if<std::string>(&v.data))
      return *s;
    throw ConfigError(field(key) + " must be a string", v.line);
  }

  Eigen::VectorXd vector(const std::string& key) const
  {
    const Value& v = get(key);
    const Array& items = as_array(v, field(key));
    Eigen::VectorXd out(static_cast<Eigen::Index>(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i)
      out[static_cast<Eigen::Index>(i)] = as_number(items[i], field(key) + "[" + std::to_string(i + 1) + "]");
    return out;
  }

  Eigen::Vector2d pair(const std::string& key, const Eigen::Vector2d& fallback) const
  {
    if (!has(key))
      return fallback;
    const Eigen::VectorXd v = vector(key);
    if (v.size() != 2)
      throw ConfigError(field(key) + " must have 2 entries", get(key).line);
    return v;
  }

  PlanarMatrix rows(const std::string& key) const
  {
    const Value& v = get(key);
    const Array& items = as_array(v, field(key));
    PlanarMatrix out(static_cast<Eigen::Index>(items.size()), 2);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string name = field(key) + "[" + std::to_string(i + 1) + "]";
      const Array& row = as_array(items[i], name);
      if (row.size() != 2)
        throw ConfigError(name + " must have 2 entries", items[i].line);
      out(static_cast<Eigen::Index>(i), 0) = as_number(row[0], name);
      out(static_cast<Eigen::Index>(i), 1) = as_number(row[1], name);
    }
    return out;
  }

  std::string field(const std::string& key) const { return "[" + name_ + "] " + key; }

private:
  static double as_number(const Value& v, const std::string& what)
  {
    if (const auto* x = std::get_if<double>(&v.data))
      return *x;
    throw ConfigError(what + " must be a number", v.line);
  }

  static const Array& as_array(const Value& v, const std::string& what)
  {
    if (const auto* a = std::get_if<Array>(&v.data))
      return *a;
    throw ConfigError(what + " must be an array", v.line);
  }

  std::string name_;
  const std::map<std::string, Value>* table_ = nullptr;
};

Sinusoid sinusoid(const Section& s, const std::string& key)
{
  if (!s.has(key))
    return {};
  const Eigen::VectorXd c = s.vector(key);
  if (c.size() != 3)
    throw ConfigError(s.field(key) + " must be [amplitude, angular_frequency, phase]", s.get(key).line);
  return {c[0], c[1], c[2]};
}

LeaderForce named_leader_force(const std::string& name, int line)
{
  if (name == "zero")
    return {};
  if (name == "two_link")
    return two_link_scenario().controller.leader;
  if (name == "five_link")
    return five_link_scenario().controller.leader;
  throw ConfigError("unknown leader_force '" + name + "' (expected zero, two_link, or five_link)", line);
}

template <class F>
auto with_context(const Section& s, const std::string& key, F&& f)
{
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(s.field(key) + ": " + e.what(), s.has(key) ? s.get(key).line : 0);
  }
}

} // namespace

Document parse(const std::string& text)
{
  return Parser(text).run();
}

Scenario scenario_from_document(const Document& doc)
{
  const Section top(doc, "");
  top.allow_only({"name"});
  const Section graph(doc, "graph");
  const Section model(doc, "model");
  const Section controller(doc, "controller");
  const Section setpoint(doc, "setpoint");
  const Section sim(doc, "sim");
  const Section initial(doc, "initial");
  for (const auto& [name, table] : doc)
    if (!name.empty() && name != "graph" && name != "model" && name != "controller" && name != "setpoint" &&
        name != "sim" && name != "initial")
      throw ConfigError("unknown section [" + name + "]", table.empty() ? 0 : table.begin()->second.line);
  graph.require_section();
  model.require_section();
  graph.allow_only({"edges"});
  model.allow_only({"masses", "lengths", "gravity"});
  controller.allow_only({"enabled", "kc", "kv", "kc_edges", "kv_edges", "feedforward", "leader_force",
                         "leader_force_x", "leader_force_y"});
  setpoint.allow_only({"type", "rows", "amplitude", "frequency", "offset"});
  sim.allow_only({"duration", "dt", "projection", "sample_every"});
  initial.allow_only({"root_position", "root_velocity", "edge_directions", "edge_rates"});

  const Eigen::VectorXd masses = model.vector("masses");
  std::vector<Edge> edges;
  const PlanarMatrix edge_rows = graph.has("edges") ? graph.rows("edges") : PlanarMatrix(0, 2);
  for (Eigen::Index j = 0; j < edge_rows.rows(); ++j) {
    const double tail = edge_rows(j, 0), head = edge_rows(j, 1);
    if (tail != std::floor(tail) || head != std::floor(head))
      throw ConfigError(graph.field("edges") + "[" + std::to_string(j + 1) + "] must hold node numbers",
                        graph.get("edges").line);
    edges.push_back({static_cast<int>(tail) - 1, static_cast<int>(head) - 1});
  }
  const int node_count = static_cast<int>(masses.size());
  auto tree = with_context(graph, "edges", [&] { return Arborescence(node_count, edges); });
  const Eigen::VectorXd lengths = model.has("lengths") ? model.vector("lengths") : Eigen::VectorXd();
  const double gravity = model.number("gravity", kDefaultGravity);

  Scenario s{top.string("name", "custom"),
             with_context(model, "masses",
                          [&] { return SarModel(std::move(tree), masses, lengths, gravity); }),
             {},
             controller.boolean("enabled", controller.present()),
             {},
             {},
             {}};
  const int m = s.model.edge_count();

  ControllerConfig& c = s.controller;
  c.kc = controller.number("kc", c.kc);
  c.kv = controller.number("kv", c.kv);
  if (controller.has("kc_edges")) {
    const auto v = controller.vector("kc_edges");
    c.kc_edges.assign(v.data(), v.data() + v.size());
  }
  if (controller.has("kv_edges")) {
    const auto v = controller.vector("kv_edges");
    c.kv_edges.assign(v.data(), v.data() + v.size());
  }
  c.feedforward = controller.boolean("feedforward", false);
  if (controller.has("leader_force")) {
    if (controller.has("leader_force_x") || controller.has("leader_force_y"))
      throw ConfigError("give either leader_force or leader_force_x/_y, not both", controller.get("leader_force").line);
    c.leader = named_leader_force(controller.string("leader_force", "zero"), controller.get("leader_force").line);
  } else {
    c.leader.x = sinusoid(controller, "leader_force_x");
    c.leader.y = sinusoid(controller, "leader_force_y");
  }
  if (s.controlled)
    with_context(controller, "kc", [&] { c.validate(m); return 0; });

  const std::string type = setpoint.string("type", setpoint.present() ? "constant" : "none");
  if (type == "none") {
    s.setpoint.kind = SetpointSpec::Kind::None;
  } else if (type == "constant") {
    s.setpoint.kind = SetpointSpec::Kind::Constant;
    s.setpoint.rows = setpoint.rows("rows");
    if (s.setpoint.rows.rows() != m)
      throw ConfigError(setpoint.field("rows") + " needs " + std::to_string(m) + " rows", setpoint.get("rows").line);
    for (int j = 0; j < m; ++j)
      if (std::abs(s.setpoint.rows.row(j).norm() - s.model.lengths()[j]) > 1e-9)
        throw ConfigError(setpoint.field("rows") + "[" + std::to_string(j + 1) +
                            "] must have the rod length " + format_number(s.model.lengths()[j]),
                          setpoint.get("rows").line);
  } else if (type == "five_link_flap") {
    s.setpoint.kind = SetpointSpec::Kind::Flapping;
    s.setpoint.amplitude = setpoint.number("amplitude", 3.0 * std::numbers::pi / 16.0);
    s.setpoint.frequency = setpoint.number("frequency", std::numbers::pi);
    s.setpoint.offset = setpoint.number("offset", std::numbers::pi / 16.0);
    if (m != 5)
      throw ConfigError(setpoint.field("type") + " five_link_flap needs exactly 5 edges", setpoint.get("type").line);
  } else {
    throw ConfigError(setpoint.field("type") + " must be none, constant, or five_link_flap",
                      setpoint.get("type").line);
  }
  if (s.controlled && s.setpoint.kind == SetpointSpec::Kind::None)
    throw ConfigError("an enabled controller needs a [setpoint]");

  s.sim.duration = sim.number("duration", s.sim.duration);
  s.sim.dt = sim.number("dt", s.sim.dt);
  s.sim.projection = sim.boolean("projection", false);
  const double every = sim.number("sample_every", 1.0);
  if (every < 1.0 || every != std::floor(every))
    throw ConfigError(sim.field("sample_every") + " must be a positive integer", sim.get("sample_every").line);
  s.sim.sample_every = static_cast<int>(every);
  if (!(s.sim.dt > 0.0))
    throw ConfigError(sim.field("dt") + " must be positive", sim.has("dt") ? sim.get("dt").line : 0);
  if (!(s.sim.duration >= 0.0))
    throw ConfigError(sim.field("duration") + " must be non-negative", sim.get("duration").line);

  s.initial.root_position = initial.pair("root_position", Eigen::Vector2d::Zero());
  s.initial.root_velocity = initial.pair("root_velocity", Eigen::Vector2d::Zero());
  if (m > 0) {
    s.initial.edge_directions = initial.rows("edge_directions");
    if (s.initial.edge_directions.rows() != m)
      throw ConfigError(initial.field("edge_directions") + " needs " + std::to_string(m) + " rows",
                        initial.get("edge_directions").line);
  } else {
    s.initial.edge_directions = PlanarMatrix(0, 2);
  }
  if (initial.has("edge_rates")) {
    s.initial.edge_rates = initial.vector("edge_rates");
    if (s.initial.edge_rates.size() != m)
      throw ConfigError(initial.field("edge_rates") + " needs " + std::to_string(m) + " entries",
                        initial.get("edge_rates").line);
  }
  with_context(initial, "edge_directions", [&] { return s.initial_state(); });
  return s;
}

Scenario load_scenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return scenario_from_document(parse(buffer.str()));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string format_number(double x)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, ptr);
  return s;
}

namespace {

std::string list(const Eigen::VectorXd& v)
{
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_number(v[i]);
  return s + "]";
}

std::string rows_list(const PlanarMatrix& m)
{
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    s += std::string(i ? ", " : "") + "[" + format_number(m(i, 0)) + ", " + format_number(m(i, 1)) + "]";
  return s + "]";
}

std::string sinusoid_list(const Sinusoid& s)
{
  return "[" + format_number(s.amplitude) + ", " + format_number(s.angular_frequency) + ", " +
         format_number(s.phase) + "]";
}

} // namespace

void write_scenario(std::ostream& out, const Scenario& s)
{
  const auto& g = s.model.graph();
  out << "name = \"" << s.name << "\"\n\n";

  out << "[graph]\n# [tail, head] pairs, 1-based; node 1 is the root\nedges = [";
  for (int j = 0; j < g.edge_count(); ++j)
    out << (j ? ", " : "") << "[" << g.edge(j).tail + 1 << ", " << g.edge(j).head + 1 << "]";
  out << "]\n\n";

  out << "[model]\n";
  out << "masses = " << list(s.model.masses()) << "\n";
  out << "lengths = " << list(s.model.lengths()) << "\n";
  out << "gravity = " << format_number(s.model.gravity()) << "\n\n";

  const ControllerConfig& c = s.controller;
  out << "[controller]\n";
  out << "enabled = " << (s.controlled ? "true" : "false") << "\n";
  out << "kc = " << format_number(c.kc) << "\n";
  out << "kv = " << format_number(c.kv) << "\n";
  if (!c.kc_edges.empty())
    out << "kc_edges = " << list(Eigen::Map<const Eigen::VectorXd>(c.kc_edges.data(), static_cast<Eigen::Index>(c.kc_edges.size()))) << "\n";
  if (!c.kv_edges.empty())
    out << "kv_edges = " << list(Eigen::Map<const Eigen::VectorXd>(c.kv_edges.data(), static_cast<Eigen::Index>(c.kv_edges.size()))) << "\n";
  out << "feedforward = " << (c.feedforward ? "true" : "false") << "\n";
  out << "# amplitude, angular frequency, phase: a cos(w t + phi)\n";
  out << "leader_force_x = " << sinusoid_list(c.leader.x) << "\n";
  out << "leader_force_y = " << sinusoid_list(c.leader.y) << "\n\n";

  out << "[setpoint]\n";
  switch (s.setpoint.kind) {
  case SetpointSpec::Kind::None:
    out << "type = \"none\"\n\n";
    break;
  case SetpointSpec::Kind::Constant:
    out << "type = \"constant\"\nrows = " << rows_list(s.setpoint.rows) << "\n\n";
    break;
  case SetpointSpec::Kind::Flapping:
    out << "type = \"five_link_flap\"\n# theta(t) = amplitude cos(frequency t) + offset\n";
    out << "amplitude = " << format_number(s.setpoint.amplitude) << "\n";
    out << "frequency = " << format_number(s.setpoint.frequency) << "\n";
    out << "offset = " << format_number(s.setpoint.offset) << "\n\n";
    break;
  }

  out << "[sim]\n";
  out << "duration = " << format_number(s.sim.duration) << "\n";
  out << "dt = " << format_number(s.sim.dt) << "\n";
  out << "projection = " << (s.sim.projection ? "true" : "false") << "\n";
  out << "sample_every = " << s.sim.sample_every << "\n\n";

  out << "[initial]\n";
  out << "root_position = " << list(s.initial.root_position) << "\n";
  out << "root_velocity = " << list(s.initial.root_velocity) << "\n";
  out << "# unit direction of each rod\n";
  out << "edge_directions = " << rows_list(s.initial.edge_directions) << "\n";
  if (s.initial.edge_rates.size() > 0)
    out << "edge_rates = " << list(s.initial.edge_rates) << "\n";
}

void save_scenario(const std::string& path, const Scenario& scenario)
{
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write '" + path + "'");
  write_scenario(out, scenario);
  if (!out)
    throw ConfigError("failed writing '" + path + "'");
}

} // namespace sar::config

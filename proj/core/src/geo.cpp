#include "scriptorium/geo.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "scriptorium/error.hpp"
#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"

namespace scriptorium::geo {

using json = nlohmann::json;

PlaceSource parse_source(std::string_view s) {
  auto src = docs::place_source_from_string(text::casefold(text::trim(s)));
  if (!src) throw Error(Errc::unknown_source, "unknown gazetteer '" + std::string(s) + "'");
  return *src;
}

static bool valid_coordinates(double lat, double lon) {
  return lat >= -90 && lat <= 90 && lon >= -180 && lon <= 180;
}

FixtureGazetteer::FixtureGazetteer(std::vector<GazetteerRecord> records) : records_(std::move(records)) {}

FixtureGazetteer FixtureGazetteer::parse(std::string_view tsv) {
  std::vector<GazetteerRecord> out;
  size_t line_no = 0;
  for (const auto& line : text::split(tsv, '\n')) {
    ++line_no;
    auto l = line;
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (text::trim(l).empty() || l.front() == '#') continue;
    auto cols = text::split(l, '\t');
    if (cols.size() != 6) throw Error(Errc::malformed_line, "gazetteer line " + std::to_string(line_no) + ": expected 6 columns");
    GazetteerRecord r;
    r.source = parse_source(cols[0]);
    r.external_id = cols[1];
    r.name = cols[2];
    try {
      r.lat = text::parse_double(cols[3]);
      r.lon = text::parse_double(cols[4]);
    } catch (const Error&) {
      throw Error(Errc::malformed_line, "gazetteer line " + std::to_string(line_no) + ": bad coordinates");
    }
    if (!valid_coordinates(r.lat, r.lon))
      throw Error(Errc::malformed_line, "gazetteer line " + std::to_string(line_no) + ": coordinates out of range");
    r.kind = cols[5];
    out.push_back(std::move(r));
  }
  return FixtureGazetteer(std::move(out));
}

FixtureGazetteer FixtureGazetteer::load(const std::filesystem::path& file) { return parse(fileio::read_file(file)); }

std::vector<GazetteerRecord> FixtureGazetteer::lookup(std::string_view name, PlaceSource source) {
  const auto want = text::fold_aggressive(name);
  std::vector<std::pair<int, const GazetteerRecord*>> hits;
  for (const auto& r : records_) {
    if (r.source != source) continue;
    const auto have = text::fold_aggressive(r.name);
    int rank = have == want ? 0 : have.starts_with(want) ? 1 : have.find(want) != std::string::npos ? 2 : -1;
    if (rank >= 0) hits.emplace_back(rank, &r);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second->external_id < b.second->external_id;
  });
  std::vector<GazetteerRecord> out;
  std::set<std::string> seen;
  for (const auto& [rank, r] : hits)
    if (seen.insert(r->external_id).second) out.push_back(*r);
  return out;
}

// ---------------------------------------------------------------------------
// Live

std::vector<GazetteerRecord> parse_geonames_json(std::string_view body) {
  std::vector<GazetteerRecord> out;
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::network, "geonames returned invalid JSON");
  if (j.contains("status")) throw Error(Errc::network, "geonames: " + j["status"].value("message", "error"));
  for (const auto& g : j.value("geonames", json::array())) {
    GazetteerRecord r;
    r.source = PlaceSource::geonames;
    r.external_id = g.contains("geonameId") ? g["geonameId"].dump() : "";
    r.name = g.value("name", "");
    r.lat = text::parse_double(g.value("lat", "0"));
    r.lon = text::parse_double(g.value("lng", "0"));
    r.kind = g.value("fcodeName", "");
    if (!r.external_id.empty() && valid_coordinates(r.lat, r.lon)) out.push_back(std::move(r));
  }
  return out;
}

std::vector<GazetteerRecord> parse_tgn_sparql_json(std::string_view body) {
  std::vector<GazetteerRecord> out;
  auto j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::network, "TGN endpoint returned invalid JSON");
  auto binding = [](const json& b, const char* key) -> std::string {
    return b.contains(key) ? b[key].value("value", "") : "";
  };
  std::set<std::string> seen;
  for (const auto& b : j["results"].value("bindings", json::array())) {
    GazetteerRecord r;
    r.source = PlaceSource::tgn;
    auto id = binding(b, "id");
    if (auto slash = id.rfind('/'); slash != std::string::npos) id = id.substr(slash + 1);
    r.external_id = id;
    r.name = binding(b, "name");
    try {
      r.lat = text::parse_double(binding(b, "lat"));
      r.lon = text::parse_double(binding(b, "long"));
    } catch (const Error&) {
      continue;
    }
    r.kind = binding(b, "type");
    if (!r.external_id.empty() && valid_coordinates(r.lat, r.lon) && seen.insert(r.external_id).second)
      out.push_back(std::move(r));
  }
  return out;
}

LiveGazetteer::LiveGazetteer(LiveConfig config) : config_(std::move(config)) {}

void LiveGazetteer::throttle(PlaceSource source) {
  std::unique_lock lock(mutex_);
  auto now = std::chrono::steady_clock::now();
  auto& last = last_call_[source];
  auto next = last + config_.min_interval;
  if (last.time_since_epoch().count() != 0 && next > now) {
    last = next;
    lock.unlock();
    std::this_thread::sleep_until(next);
    return;
  }
  last = now;
}

std::string LiveGazetteer::fetch(const std::string& base, const std::string& path_and_query, PlaceSource source) {
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    throttle(source);
    httplib::Client client(base);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    auto res = client.Get(path_and_query, {{"Accept", "application/json"}});
    if (res && res->status == 200) return res->body;
    last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    if (res && res->status >= 400 && res->status < 500) break;  // retrying will not help
  }
  throw Error(Errc::network, std::string(docs::to_string(source)) + " lookup failed: " + last_error);
}

namespace {

// Splits "http://host:port/path" into the client base and the path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme = url.find("://");
  auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string sparql_string(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::vector<GazetteerRecord> LiveGazetteer::lookup(std::string_view name, PlaceSource source) {
  if (source == PlaceSource::geonames) {
    if (config_.geonames_user.empty()) throw Error(Errc::network, "GEONAMES_USER is not set");
    auto path = "/searchJSON?q=" + text::percent_encode(name) + "&maxRows=" + std::to_string(config_.max_rows) +
                "&username=" + text::percent_encode(config_.geonames_user);
    return parse_geonames_json(fetch(config_.geonames_host, path, source));
  }
  if (config_.tgn_endpoint.empty()) throw Error(Errc::network, "TGN_ENDPOINT is not set");
  const std::string query =
      "PREFIX gvp: <http://vocab.getty.edu/ontology#> "
      "PREFIX xl: <http://www.w3.org/2008/05/skos-xl#> "
      "PREFIX foaf: <http://xmlns.com/foaf/0.1/> "
      "PREFIX wgs: <http://www.w3.org/2003/01/geo/wgs84_pos#> "
      "PREFIX skos: <http://www.w3.org/2004/02/skos/core#> "
      "PREFIX luc: <http://www.ontotext.com/owlim/lucene#> "
      "SELECT ?id ?name ?lat ?long ?type WHERE { ?id skos:inScheme <http://vocab.getty.edu/tgn/> ; "
      "luc:term \"" + sparql_string(name) + "\" ; gvp:prefLabelGVP/xl:literalForm ?name ; "
      "foaf:focus ?f . ?f wgs:lat ?lat ; wgs:long ?long . "
      "OPTIONAL { ?id gvp:placeTypePreferred/gvp:prefLabelGVP/xl:literalForm ?type } } LIMIT " +
      std::to_string(config_.max_rows);
  auto [base, path] = split_url(config_.tgn_endpoint);
  return parse_tgn_sparql_json(fetch(base, path + "?query=" + text::percent_encode(query), source));
}

// ---------------------------------------------------------------------------

GeoConfig GeoConfig::from_env(std::filesystem::path fixture_file) {
  GeoConfig c;
  c.fixture_file = std::move(fixture_file);
  auto env = [](const char* k) -> std::string {
    const char* v = std::getenv(k);
    return v ? v : "";
  };
  if (text::casefold(env("GEO_MODE")) == "live") c.mode = Mode::live;
  c.live.geonames_user = env("GEONAMES_USER");
  c.live.tgn_endpoint = env("TGN_ENDPOINT");
  return c;
}

GeoClient::GeoClient(std::unique_ptr<Gazetteer> backend) : backend_(std::move(backend)) {}

GeoClient GeoClient::from_config(const GeoConfig& config) {
  if (config.mode == Mode::live) return GeoClient(std::make_unique<LiveGazetteer>(config.live));
  return GeoClient(std::make_unique<FixtureGazetteer>(FixtureGazetteer::load(config.fixture_file)));
}

std::vector<GazetteerRecord> GeoClient::lookup(std::string_view name, std::string_view source) {
  if (text::trim(name).empty()) throw Error(Errc::empty_name, "place name must not be empty");
  return backend_->lookup(name, parse_source(source));
}

}  // namespace scriptorium::geo

#include "nass/store/store.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "nass/error.hpp"
#include "nass/morph/analyzer.hpp"
#include "nass/text/utf8.hpp"

namespace fs = std::filesystem;

namespace nass::store {

namespace {

constexpr std::string_view kManifestHeader = "#nass-manifest v1";

std::string escape_field(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw Error(ErrorCode::CorruptStore, "manifest: dangling escape");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw Error(ErrorCode::CorruptStore, "manifest: unknown escape");
    }
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::optional<std::int64_t> parse_id(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v < 1) return std::nullopt;
  return v;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::CorruptStore, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void sync_fd(int fd, const fs::path& p) {
  if (::fsync(fd) != 0) {
    const int err = errno;
    ::close(fd);
    throw Error(ErrorCode::StorageFailure, "cannot sync " + p.string() + ": " + std::strerror(err));
  }
  ::close(fd);
}

// Temp file, fsync, rename, then fsync the directory so the rename survives a
// power cut.
void write_atomic(const fs::path& p, std::string_view bytes) {
  fs::path tmp = p;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::StorageFailure, "cannot write " + tmp.string() + ": " + std::strerror(errno));
  for (std::size_t done = 0; done < bytes.size();) {
    const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      const int err = errno;
      ::close(fd);
      throw Error(ErrorCode::StorageFailure, "cannot write " + tmp.string() + ": " + std::strerror(err));
    }
    done += static_cast<std::size_t>(n);
  }
  sync_fd(fd, tmp);
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw Error(ErrorCode::StorageFailure, "cannot rename " + tmp.string() + ": " + ec.message());
  const int dir = ::open(p.parent_path().c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dir >= 0) sync_fd(dir, p.parent_path());
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool blank(std::string_view s) {
  for (char32_t c : text::decode(s))
    if (!text::is_space(c)) return false;
  return true;
}

}  // namespace

std::string format_text_id(std::int64_t n) {
  std::string s = std::to_string(n);
  if (s.size() < 4) s.insert(0, 4 - s.size(), '0');
  return s;
}

std::string format_manifest(const CorpusManifest& m) {
  std::string out(kManifestHeader);
  out += "\nnext\t" + std::to_string(m.next_id) + "\n";
  for (const auto& r : m.entries) {
    out += r.text_id + "\t" + escape_field(r.title) + "\t" + r.text_path + "\t" + r.lom_path + "\t" +
           r.profile_digest + "\t" + r.created_at + "\n";
  }
  return out;
}

CorpusManifest parse_manifest(std::string_view s) {
  CorpusManifest m;
  std::size_t pos = 0;
  int line_no = 0;
  bool saw_next = false;
  while (pos < s.size()) {
    auto nl = s.find('\n', pos);
    std::string_view line = s.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? s.size() : nl + 1;
    ++line_no;
    auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::CorruptStore, "manifest line " + std::to_string(line_no) + ": " + why);
    };
    if (line_no == 1) {
      if (line != kManifestHeader) bad("missing header");
      continue;
    }
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f[0] == "next") {
      if (f.size() != 2 || !parse_id(f[1])) bad("bad next counter");
      m.next_id = *parse_id(f[1]);
      saw_next = true;
      continue;
    }
    if (f.size() != 6) bad("expected 6 fields");
    if (!parse_id(f[0])) bad("bad text id");
    ManifestRow r{std::string(f[0]), unescape_field(f[1]), std::string(f[2]), std::string(f[3]),
                  std::string(f[4]), std::string(f[5])};
    if (!m.entries.empty() && *parse_id(m.entries.back().text_id) >= *parse_id(r.text_id))
      bad("text ids out of order");
    m.entries.push_back(std::move(r));
  }
  if (line_no == 0) throw Error(ErrorCode::CorruptStore, "manifest is empty");
  if (!saw_next) throw Error(ErrorCode::CorruptStore, "manifest has no next counter");
  for (const auto& r : m.entries) {
    if (*parse_id(r.text_id) >= m.next_id) throw Error(ErrorCode::CorruptStore, "next counter behind text ids");
  }
  return m;
}

std::string content_digest(std::string_view text, std::string_view lom_xml) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error(ErrorCode::StorageFailure, "digest context");
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  const char sep = '\0';
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, text.data(), text.size()) == 1 && EVP_DigestUpdate(ctx, &sep, 1) == 1 &&
            EVP_DigestUpdate(ctx, lom_xml.data(), lom_xml.size()) == 1 && EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(ErrorCode::StorageFailure, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

const StoredText* Snapshot::find(std::string_view text_id) const {
  for (const auto& t : texts)
    if (t->entry.text_id == text_id) return t.get();
  return nullptr;
}

std::vector<index::DocumentModel> Snapshot::models() const {
  std::vector<index::DocumentModel> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(t->model);
  return out;
}

CorpusStore::CorpusStore(fs::path root, std::shared_ptr<const morph::Lexicon> lexicon, StoreOptions options)
    : root_(std::move(root)), lexicon_(std::move(lexicon)), options_(std::move(options)) {
  if (!options_.clock) options_.clock = utc_now;
  std::error_code ec;
  fs::create_directories(root_ / "corpus", ec);
  if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + (root_ / "corpus").string() + ": " + ec.message());

  if (!fs::exists(manifest_path())) write_manifest(CorpusManifest{});
  manifest_ = parse_manifest(read_file(manifest_path()));

  auto snap = std::make_shared<Snapshot>();
  for (const auto& row : manifest_.entries) {
    std::string body = read_file(root_ / row.text_path);
    std::string xml = read_file(root_ / row.lom_path);
    if (content_digest(body, xml) != row.profile_digest)
      throw Error(ErrorCode::CorruptStore, "digest mismatch for text " + row.text_id);
    snap->texts.push_back(make_stored(row, std::move(body), lom::parse_xml(xml)));
  }
  std::atomic_store(&snapshot_, std::shared_ptr<const Snapshot>(std::move(snap)));
}

fs::path CorpusStore::manifest_path() const { return root_ / "corpus" / "manifest"; }

void CorpusStore::write_manifest(const CorpusManifest& m) { write_atomic(manifest_path(), format_manifest(m)); }

std::shared_ptr<const Snapshot> CorpusStore::snapshot() const { return std::atomic_load(&snapshot_); }

std::shared_ptr<StoredText> CorpusStore::make_stored(const ManifestRow& row, std::string body,
                                                      lom::LomRecord lom) const {
  auto st = std::make_shared<StoredText>();
  st->annotated = morph::analyze_text(row.text_id, body, *lexicon_);
  st->entry = {row.text_id, row.title, std::move(body), row.created_at};
  st->lom = std::move(lom);
  st->model = index::build_model(st->annotated, st->lom);
  return st;
}

ManifestRow CorpusStore::row_of(std::string_view text_id) const {
  std::lock_guard lock(write_mutex_);
  for (const auto& r : manifest_.entries)
    if (r.text_id == text_id) return r;
  throw Error(ErrorCode::NotFound, "no text " + std::string(text_id));
}

std::string CorpusStore::add_text(std::string_view title, std::string_view body, const lom::LomRecord& manual) {
  if (!text::is_valid(body)) throw Error(ErrorCode::InvalidEncoding, "body is not valid UTF-8");
  if (!text::is_valid(title)) throw Error(ErrorCode::InvalidEncoding, "title is not valid UTF-8");
  if (blank(body)) throw Error(ErrorCode::EmptyText, "body is empty");

  std::lock_guard lock(write_mutex_);
  // Directories left by an interrupted ingestion still use up their id.
  std::int64_t n = manifest_.next_id;
  for (const auto& d : fs::directory_iterator(root_ / "corpus")) {
    if (!d.is_directory()) continue;
    if (auto v = parse_id(d.path().filename().string())) n = std::max(n, *v + 1);
  }
  const std::string id = format_text_id(n);

  morph::AnnotatedText annotated = morph::analyze_text(id, body, *lexicon_);
  lom::LomRecord rec = manual;
  rec.parse_issues.clear();
  rec.general.identifier = id;
  rec.general.title = std::string(title);
  if (!rec.general.language) rec.general.language = "ar";
  if (!rec.educational.language) rec.educational.language = "ar";
  if (!rec.educational.difficulty)
    rec.educational.difficulty = lom::infer_difficulty(annotated.profile, options_.difficulty);
  rec = lom::embed_profile(std::move(rec), annotated.profile);
  std::string xml = lom::serialize_xml(rec);

  const fs::path dir = root_ / "corpus" / id;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + dir.string() + ": " + ec.message());

  ManifestRow row{id,
                  std::string(title),
                  "corpus/" + id + "/text.txt",
                  "corpus/" + id + "/lom.xml",
                  content_digest(body, xml),
                  options_.clock()};
  auto hook = [&](std::string_view step) {
    if (options_.fault_hook) options_.fault_hook(step, id);
  };
  write_atomic(root_ / row.text_path, body);
  hook("text");
  write_atomic(root_ / row.lom_path, xml);
  hook("lom");
  CorpusManifest next = manifest_;
  next.entries.push_back(row);
  next.next_id = n + 1;
  write_manifest(next);
  hook("manifest");
  manifest_ = std::move(next);

  auto stored = std::make_shared<StoredText>();
  stored->entry = {id, std::string(title), std::string(body), row.created_at};
  stored->annotated = std::move(annotated);
  stored->lom = std::move(rec);
  stored->model = index::build_model(stored->annotated, stored->lom);
  auto snap = std::make_shared<Snapshot>(*snapshot());
  snap->texts.push_back(std::move(stored));
  std::atomic_store(&snapshot_, std::shared_ptr<const Snapshot>(std::move(snap)));
  return id;
}

TextEntry CorpusStore::get_text(std::string_view text_id) const {
  ManifestRow row = row_of(text_id);
  std::string body = read_file(root_ / row.text_path);
  std::string xml = read_file(root_ / row.lom_path);
  if (content_digest(body, xml) != row.profile_digest)
    throw Error(ErrorCode::CorruptStore, "digest mismatch for text " + row.text_id);
  return {row.text_id, row.title, std::move(body), row.created_at};
}

std::string CorpusStore::load_lom_xml(std::string_view text_id) const {
  ManifestRow row = row_of(text_id);
  std::string body = read_file(root_ / row.text_path);
  std::string xml = read_file(root_ / row.lom_path);
  if (content_digest(body, xml) != row.profile_digest)
    throw Error(ErrorCode::CorruptStore, "digest mismatch for text " + row.text_id);
  return xml;
}

lom::LomRecord CorpusStore::load_lom(std::string_view text_id) const {
  try {
    return lom::parse_xml(load_lom_xml(text_id));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedXml || e.code() == ErrorCode::SchemaViolation)
      throw Error(ErrorCode::CorruptStore, "text " + std::string(text_id) + ": " + e.what());
    throw;
  }
}

CorpusManifest CorpusStore::list_texts() const {
  std::lock_guard lock(write_mutex_);
  return manifest_;
}

std::size_t CorpusStore::rebuild_index() {
  std::lock_guard lock(write_mutex_);
  CorpusManifest next = manifest_;
  auto snap = std::make_shared<Snapshot>();
  for (auto& row : next.entries) {
    std::string body = read_file(root_ / row.text_path);
    std::string xml = read_file(root_ / row.lom_path);
    if (content_digest(body, xml) != row.profile_digest)
      throw Error(ErrorCode::CorruptStore, "digest mismatch for text " + row.text_id);
    lom::LomRecord rec;
    try {
      rec = lom::parse_xml(xml);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptStore, "text " + row.text_id + ": " + e.what());
    }
    auto stored = make_stored(row, body, {});
    rec = lom::embed_profile(std::move(rec), stored->annotated.profile);
    std::string fresh = lom::serialize_xml(rec);
    if (fresh != xml) {
      write_atomic(root_ / row.lom_path, fresh);
      row.profile_digest = content_digest(body, fresh);
    }
    stored->lom = std::move(rec);
    stored->model = index::build_model(stored->annotated, stored->lom);
    snap->texts.push_back(std::move(stored));
  }
  if (next != manifest_) write_manifest(next);
  manifest_ = std::move(next);
  std::atomic_store(&snapshot_, std::shared_ptr<const Snapshot>(std::move(snap)));
  return manifest_.entries.size();
}

}  // namespace nass::store

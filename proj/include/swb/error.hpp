#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swb {

// Every failure the library reports carries one of these codes. The service
// maps them onto HTTP status codes, the CLI onto exit codes.
enum class Errc {
  EmptyInput,
  InvalidOrder,
  EmptyCorpus,
  FormatError,
  DimensionMismatch,
  EmptyFile,
  IoError,
  EmptyDocument,
  BadTeleport,
  FocusMissing,
  NoEmbeddableSentences,
  MissingEmbeddings,
  InvalidConfig,
  EmptyText,
  LexiconFormatError,
  EmptyBatch,
  NoEmbeddableTokens,
  UnknownMeasure,
  UnknownModel,
  MissingField,
  BadType,
  BadArgumentSpec,
  BadVersion,
  Timeout,
  ProtocolError,
  RemoteError,
  ArgumentValidation,
  DuplicateName,
  MissingReference,
  NoCandidates,
  MalformedRecord,
  EmptyDataset,
  InsufficientData,
  EmptyRun,
  NotFound,
  CorruptRun,
  FetchError,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidOrder: return "InvalidOrder";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::FormatError: return "FormatError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::IoError: return "IoError";
    case Errc::EmptyDocument: return "EmptyDocument";
    case Errc::BadTeleport: return "BadTeleport";
    case Errc::FocusMissing: return "FocusMissing";
    case Errc::NoEmbeddableSentences: return "NoEmbeddableSentences";
    case Errc::MissingEmbeddings: return "MissingEmbeddings";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyText: return "EmptyText";
    case Errc::LexiconFormatError: return "LexiconFormatError";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::NoEmbeddableTokens: return "NoEmbeddableTokens";
    case Errc::UnknownMeasure: return "UnknownMeasure";
    case Errc::UnknownModel: return "UnknownModel";
    case Errc::MissingField: return "MissingField";
    case Errc::BadType: return "BadType";
    case Errc::BadArgumentSpec: return "BadArgumentSpec";
    case Errc::BadVersion: return "BadVersion";
    case Errc::Timeout: return "Timeout";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::RemoteError: return "RemoteError";
    case Errc::ArgumentValidation: return "ArgumentValidation";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::MissingReference: return "MissingReference";
    case Errc::NoCandidates: return "NoCandidates";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::EmptyRun: return "EmptyRun";
    case Errc::NotFound: return "NotFound";
    case Errc::CorruptRun: return "CorruptRun";
    case Errc::FetchError: return "FetchError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace swb

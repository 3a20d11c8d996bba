"""Domain error taxonomy shared by all modules.

Every error carries a stable machine-readable ``code`` used by the CLI
(exit codes) and the HTTP service (error payloads).
"""

from __future__ import annotations


class EEGLogError(Exception):
    """Base class for all domain errors."""

    code = "DomainError"
    exit_code = 1

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class SchemaError(EEGLogError):
    code = "SchemaError"
    exit_code = 2


class ChannelOrderMismatch(EEGLogError):
    code = "ChannelOrderMismatch"
    exit_code = 10


class NonMonotoneTimestamps(EEGLogError):
    code = "NonMonotoneTimestamps"
    exit_code = 11


class BadSample(EEGLogError):
    """Non-finite sample value in a recording; message cites the row."""

    code = "BadSample"
    exit_code = 12


class TrialOutOfRange(EEGLogError):
    code = "TrialOutOfRange"
    exit_code = 13


class EpochTooShort(EEGLogError):
    code = "EpochTooShort"
    exit_code = 14


class DatasetShapeMismatch(EEGLogError):
    code = "DatasetShapeMismatch"
    exit_code = 15


class MissingTargetChannel(EEGLogError):
    code = "MissingTargetChannel"
    exit_code = 16


class SignalTooShort(EEGLogError):
    code = "SignalTooShort"
    exit_code = 20


class UnsupportedSamplingRate(EEGLogError):
    code = "UnsupportedSamplingRate"
    exit_code = 21


class DimensionMismatch(EEGLogError):
    code = "DimensionMismatch"
    exit_code = 22


class SingleClassData(EEGLogError):
    code = "SingleClassData"
    exit_code = 30


class InsufficientData(EEGLogError):
    code = "InsufficientData"
    exit_code = 31


class ProfileMismatch(EEGLogError):
    code = "ProfileMismatch"
    exit_code = 32


class NoData(EEGLogError):
    code = "NoData"
    exit_code = 40


class NotFound(EEGLogError):
    code = "NotFound"
    exit_code = 44


class VersionMismatch(EEGLogError):
    code = "VersionMismatch"
    exit_code = 45


class TrainingInProgress(EEGLogError):
    code = "TrainingInProgress"
    exit_code = 46

package com.toy.service;

/** Marker for application services. */
public interface Service {
}

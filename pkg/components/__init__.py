# Components package 